#pragma once

#include <stdexcept>
#include <string>

namespace flowstack {

// Malformed or unusable input data (CSV, labels, sampling).
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A learner could not be trained on the data it was given.
class TrainingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration; `key()` names the offending setting when known.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

}  // namespace flowstack
