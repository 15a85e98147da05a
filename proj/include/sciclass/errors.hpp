#pragma once

#include <stdexcept>
#include <string>

namespace sciclass {

// Malformed or inconsistent input data (corpus files, model files,
// prediction files). Maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration or command usage. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sciclass
