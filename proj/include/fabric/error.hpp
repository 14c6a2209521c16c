#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fabric {

/// Root of every error the engine throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (negative mass, bad fraction...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A table or configuration is incomplete (e.g. endpoint factor missing).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A lookup failed: unknown region, device, year out of window, etc.
class ResolutionError : public Error {
 public:
  ResolutionError(std::string message, std::vector<std::string> candidates = {})
      : Error(std::move(message)), candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

/// Bundle failed to load; carries every problem found, not just the first.
class DatasetError : public Error {
 public:
  explicit DatasetError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// An internal consistency check failed (closure, share conservation).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace fabric
