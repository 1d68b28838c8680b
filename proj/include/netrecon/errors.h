#ifndef NETRECON_ERRORS_H_
#define NETRECON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace netrecon {

// Invalid argument values (probabilities outside [0,1], zero pinch, P >= N...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Operand shapes that do not agree.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// A level set that contains its own vertex, i.e. implies a self-loop.
class InvalidLevelSetError : public std::invalid_argument {
 public:
  explicit InvalidLevelSetError(const std::string& what) : std::invalid_argument(what) {}
};

// Exhaustive enumeration requested above the configured size limit.
class UnsupportedSizeError : public std::runtime_error {
 public:
  explicit UnsupportedSizeError(const std::string& what) : std::runtime_error(what) {}
};

// Dictionary matrix without full column rank; coefficients are not identifiable.
class RankDeficiencyError : public std::runtime_error {
 public:
  explicit RankDeficiencyError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files or configs.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netrecon

#endif  // NETRECON_ERRORS_H_
