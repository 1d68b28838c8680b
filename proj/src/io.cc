#include "netrecon/io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <utility>

#include "netrecon/errors.h"

namespace netrecon {

std::string FormatDouble(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

double ParseDouble(std::string_view text) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

long ParseInt(std::string_view text) {
  text = Trim(text);
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      break;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

void WriteTrajectoriesCsv(std::ostream& out, const std::vector<Trajectory>& trajs) {
  out << "q,t,i,value\n";
  for (const Trajectory& traj : trajs) {
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      const Eigen::VectorXd& x = traj.states[t];
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << (traj.pinch_index + 1) << ',' << t << ',' << (i + 1) << ','
            << FormatDouble(x(i)) << '\n';
      }
    }
  }
}

std::vector<Trajectory> ReadTrajectoriesCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty trajectory file");
  // (q, t) -> entries
  std::map<int, std::map<int, std::vector<std::pair<int, double>>>> raw;
  int n = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 4) throw FormatError("expected 4 fields on line " + std::to_string(line_no));
    const int q = static_cast<int>(ParseInt(f[0]));
    const int t = static_cast<int>(ParseInt(f[1]));
    const int i = static_cast<int>(ParseInt(f[2]));
    if (q < 1 || t < 0 || i < 1) throw FormatError("bad index on line " + std::to_string(line_no));
    raw[q - 1][t].emplace_back(i - 1, ParseDouble(f[3]));
    n = std::max(n, i);
  }
  std::vector<Trajectory> out;
  for (auto& [q, by_time] : raw) {
    Trajectory traj;
    traj.pinch_index = q;
    int expected_t = 0;
    for (auto& [t, entries] : by_time) {
      if (t != expected_t++) throw FormatError("trajectory " + std::to_string(q + 1) + " has a gap");
      Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
      for (auto [i, v] : entries) x(i) = v;
      traj.states.push_back(std::move(x));
    }
    traj.pinch_magnitude = traj.states.front()(q);
    out.push_back(std::move(traj));
  }
  return out;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace netrecon
