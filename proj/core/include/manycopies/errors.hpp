#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace manycopies {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dense object would exceed NumericConfig::dense_cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : Error(what + ": " + std::to_string(requested) + " entries exceeds dense cap of " +
              std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A requested flag (hermitian, positive, trace one, ...) does not hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Time integration became untrustworthy: step too large, trace drift or
// loss of positivity.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

// An unsharp or faulty observable pair lies outside the joint-measurability
// region. `value` carries the quantity that crossed the frontier.
class FrontierViolation : public Error {
 public:
  FrontierViolation(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace manycopies
