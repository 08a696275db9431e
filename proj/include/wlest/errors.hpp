#pragma once

#include <stdexcept>
#include <string>

namespace wlest {

/// Error categories. The CLI maps each one onto exactly one exit code.
enum class ErrorKind {
  Usage,
  Dimension,
  Validation,
  Parse,
  Configuration,
  Singularity,
  Rank,
  Consistency,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define WLEST_DEFINE_ERROR(Name, Kind)                   \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what)               \
        : Error(ErrorKind::Kind, what) {}                \
  }

WLEST_DEFINE_ERROR(UsageError, Usage);
WLEST_DEFINE_ERROR(DimensionError, Dimension);
WLEST_DEFINE_ERROR(ValidationError, Validation);
WLEST_DEFINE_ERROR(ParseError, Parse);
WLEST_DEFINE_ERROR(ConfigurationError, Configuration);
WLEST_DEFINE_ERROR(SingularityError, Singularity);
WLEST_DEFINE_ERROR(RankError, Rank);
WLEST_DEFINE_ERROR(ConsistencyError, Consistency);

#undef WLEST_DEFINE_ERROR

/// 0 success, 1 usage, 2 input validation, 3 numerical failure.
constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Usage:
      return 1;
    case ErrorKind::Dimension:
    case ErrorKind::Validation:
    case ErrorKind::Parse:
    case ErrorKind::Configuration:
      return 2;
    case ErrorKind::Singularity:
    case ErrorKind::Rank:
    case ErrorKind::Consistency:
      return 3;
  }
  return 3;
}

}  // namespace wlest
