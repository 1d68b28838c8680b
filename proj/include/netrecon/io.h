#ifndef NETRECON_IO_H_
#define NETRECON_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netrecon/dynamics.h"

namespace netrecon {

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double v);
double ParseDouble(std::string_view text);
long ParseInt(std::string_view text);

std::vector<std::string_view> SplitCsvLine(std::string_view line);

// Trajectory CSV: header "q,t,i,value", 1-based q and i, every entry of every
// state written densely.
void WriteTrajectoriesCsv(std::ostream& out, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> ReadTrajectoriesCsv(std::istream& in);

// Opens for writing or throws FormatError.
std::ofstream OpenForWrite(const std::filesystem::path& path);
std::ifstream OpenForRead(const std::filesystem::path& path);

}  // namespace netrecon

#endif  // NETRECON_IO_H_
