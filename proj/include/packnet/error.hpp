#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace packnet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the eigensolvers when the graph has more than one component.
class DisconnectedError : public Error {
 public:
  explicit DisconnectedError(std::vector<std::vector<int>> components);
  const std::vector<std::vector<int>>& components() const noexcept { return components_; }

 private:
  std::vector<std::vector<int>> components_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, std::int64_t step)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace packnet
