#pragma once

#include "sfverify/chart.hpp"
#include "sfverify/impl_ir.hpp"

namespace sfv::ir {

/// Emits the program a code generator of the supported pattern produces for
/// `c`: DWork encoding fields, `IN_X` codes numbered 1..k per composite in
/// child order, `EV_E` codes for input events in declaration order,
/// `<Chart>_initialize` zeroing every field and `<Chart>_output(tid)`.
/// Invalid charts and history below a parallel composite are reported in
/// the diagnostics.
Parsed<ImplProgram> generate_reference(const chart::ChartDef& c);

}  // namespace sfv::ir
