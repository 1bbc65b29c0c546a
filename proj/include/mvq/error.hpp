#pragma once
#include <stdexcept>

namespace mvq {

// All toolkit errors derive from this; the CLI maps them to exit status 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mvq
