#pragma once

#include <stdexcept>
#include <string>

namespace qsched {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: unknown keys, malformed specs, out-of-range parameters.
struct ConfigError : Error {
  using Error::Error;
};

// Problem size exceeds what the simulator will allocate.
struct CapacityError : Error {
  using Error::Error;
};

// Operands with incompatible qubit counts / lengths.
struct DimensionError : Error {
  using Error::Error;
};

// Filesystem and file-format failures.
struct IoError : Error {
  using Error::Error;
};

}  // namespace qsched
