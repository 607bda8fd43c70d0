#pragma once

#include <stdexcept>
#include <string>

namespace synchro {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct BoundViolation : Error {
  using Error::Error;
};
struct DuplicateChannel : Error {
  using Error::Error;
};
struct UnknownAgent : Error {
  using Error::Error;
};
struct UnknownChannel : Error {
  using Error::Error;
};
struct InvalidDelay : Error {
  using Error::Error;
};
struct ProtocolError : Error {
  using Error::Error;
};
struct ExplosionGuard : Error {
  using Error::Error;
};
struct IntervalError : Error {
  using Error::Error;
};
struct EmptyGroup : Error {
  using Error::Error;
};
struct NonExhaustiveBundle : Error {
  using Error::Error;
};
struct HorizonExceeded : Error {
  using Error::Error;
};
struct ConnectivityError : Error {
  using Error::Error;
};
struct NoTrigger : Error {
  using Error::Error;
};
struct NonSimultaneous : Error {
  using Error::Error;
};
struct TriggerNotInitial : Error {
  using Error::Error;
};
struct UnknownResponse : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

// Collects every problem found while validating a scenario, so the user
// sees all of them at once instead of fixing one per run.
struct ValidationError : Error {
  std::vector<std::string> issues;
  explicit ValidationError(std::vector<std::string> list)
      : Error(join(list)), issues(std::move(list)) {}

 private:
  static std::string join(const std::vector<std::string>& list) {
    std::string out = "scenario validation failed:";
    for (const auto& s : list) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
};

}  // namespace synchro
