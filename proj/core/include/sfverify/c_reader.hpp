#pragma once

#include <string>
#include <vector>

#include "sfverify/impl_ir.hpp"

namespace sfv::ir {

struct CReadResult {
  Parsed<ImplProgram> program;
  /// True when the input was rejected for leaving the generated-code
  /// pattern (loops, pointers, switch, local declarations, ...).
  bool nonconformant = false;
  /// C-boolean idioms and casts rewritten while reading, one line each.
  std::vector<std::string> normalization_log;
};

/// Reads the restricted C pattern of generated chart code: `#define`d
/// constants, `typedef struct` records bound to `<Chart>_DWork`, `_B`,
/// `_U`, `_Y` globals, and functions made of assignments, if/else chains
/// and calls. Chart-name prefixes and suffixes are stripped, so
/// `AbsoluteValue_IN_P` becomes the constant `IN_P` and
/// `is_c1_AbsoluteValue` the field `is_c1`.
CReadResult read_c_subset(const std::string& text);

/// Renders a program in that same pattern; `read_c_subset` accepts it.
std::string render_c(const ImplProgram& p);

}  // namespace sfv::ir
