#pragma once

#include <stdexcept>
#include <string>

namespace chainent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: a malformed chain, protocol, partition or configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configuration document failed validation. `path` names the offending
/// field, e.g. "partition.traced".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string path, const std::string& message)
      : InvalidArgument(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A numerical stage failed: solver non-convergence, step-size underflow,
/// a spectrum outside its physical range.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainent
