#pragma once
#include <stdexcept>
#include <string>

namespace qbmsym {

/// Bad user input: malformed documents, mismatched lengths, invalid flags.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configurable resource cap was exceeded (dense dimension, scan size,
/// group order). Raising the cap is the intended remedy.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbmsym
