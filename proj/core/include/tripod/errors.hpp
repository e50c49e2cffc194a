#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tripod {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Foot target outside the reachable annulus of the two-link chain.
class UnreachableError : public Error {
  public:
    using Error::Error;
};

// A kinematic solution exists but violates the calibrated servo range.
class JointLimitError : public Error {
  public:
    using Error::Error;
};

// Stroke endpoint closer to the workspace boundary than the safety margin.
class StrokeTooLongError : public Error {
  public:
    using Error::Error;
};

// Pivot requested below the minimum body speed.
class NoMomentumError : public Error {
  public:
    using Error::Error;
};

class UnstablePhaseError : public Error {
  public:
    UnstablePhaseError(const std::string& msg, double at_time)
        : Error(msg), at_time_(at_time) {}
    double at_time() const { return at_time_; }

  private:
    double at_time_;
};

class InfeasibleError : public Error {
  public:
    InfeasibleError(const std::string& msg, std::vector<std::string> reasons)
        : Error(msg), reasons_(std::move(reasons)) {}
    const std::vector<std::string>& reasons() const { return reasons_; }

  private:
    std::vector<std::string> reasons_;
};

class CordTooHighError : public Error {
  public:
    using Error::Error;
};

// Config file could not be tokenized / has unknown keys.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Config parsed but one or more invariants are violated; lists every one.
class ValidationError : public Error {
  public:
    ValidationError(const std::string& msg, std::vector<std::string> violations)
        : Error(msg), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

}  // namespace tripod
