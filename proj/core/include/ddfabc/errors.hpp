#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ddfabc {

/// Invalid argument to an operation (bad range, mismatched sizes, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bad or inconsistent run configuration: unknown key, missing file,
/// model/stencil mismatch.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed binary or text artifact.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A field or auxiliary value went non-finite.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& what, std::int64_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

class TrainingDivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddfabc
