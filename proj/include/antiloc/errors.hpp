#pragma once

#include <stdexcept>
#include <string>

namespace antiloc {

class UnknownLevel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two scatterers of a path closer than the far-field cutoff.
class DegeneratePath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroCrossSection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace antiloc
