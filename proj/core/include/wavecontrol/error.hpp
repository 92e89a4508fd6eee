#pragma once

#include <stdexcept>
#include <string>

namespace wavecontrol {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: geometry, controls, configuration. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown (singular factorization, non-convergence). Exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidGeometry : public InputError {
 public:
  using InputError::InputError;
};

class BuoyancyImbalance : public InputError {
 public:
  using InputError::InputError;
};

class InadmissibleControl : public InputError {
 public:
  using InputError::InputError;
};

class InadmissibleInitialControl : public InadmissibleControl {
 public:
  using InadmissibleControl::InadmissibleControl;
};

class ConfigError : public InputError {
 public:
  ConfigError(std::string key, const std::string& what)
      : InputError(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class MeshingFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AssemblyFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularKKT : public SingularSystem {
 public:
  using SingularSystem::SingularSystem;
};

}  // namespace wavecontrol
