#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nceig {

// Process exit status associated with each failure category.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  kernel = 3,
  eigensolver = 4,
  tracking = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Invalid sizes, intervals, orders and option combinations.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

class KernelError : public Error {
 public:
  explicit KernelError(const std::string& what) : Error(ExitCode::kernel, what) {}
};

class ParseError : public KernelError {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : KernelError("syntax error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        message_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t offset_;
  std::string message_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(std::size_t offset, const std::string& name)
      : ParseError(offset, "unknown identifier '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NonFiniteKernelError : public KernelError {
 public:
  NonFiniteKernelError(double x, double u, const std::string& what)
      : KernelError(what), x_(x), u_(u) {}
  double x() const noexcept { return x_; }
  double u() const noexcept { return u_; }

 private:
  double x_;
  double u_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t sweeps, std::size_t deflated)
      : Error(ExitCode::eigensolver, what), sweeps_(sweeps), deflated_(deflated) {}
  std::size_t sweeps() const noexcept { return sweeps_; }
  std::size_t deflated() const noexcept { return deflated_; }

 private:
  std::size_t sweeps_;
  std::size_t deflated_;
};

class TrackingError : public Error {
 public:
  explicit TrackingError(const std::string& what) : Error(ExitCode::tracking, what) {}
};

}  // namespace nceig
