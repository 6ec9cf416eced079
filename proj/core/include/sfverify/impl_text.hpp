#pragma once

#include <map>
#include <set>
#include <string>

#include "sfverify/impl_ir.hpp"

namespace sfv::ir {

/// Parses the `.sfi` program text format (see docs/impl-format.md).
/// Undeclared fields, unknown identifiers and calls to undefined functions
/// are reported with positions.
Parsed<ImplProgram> parse_impl(const std::string& text);

std::string print_impl(const ImplProgram& p);

/// JSON dump for tooling: records, constants, functions (bodies as text).
std::string impl_to_json(const ImplProgram& p);

/// Replaces Var nodes naming a parameter or constant with Param / Const
/// nodes; remaining Vars are left for the caller to report.
ExprPtr resolve_identifiers(const ExprPtr& e, const std::set<std::string>& params,
                            const std::map<std::string, std::int64_t>& constants);
StmtPtr resolve_identifiers(const StmtPtr& s, const std::set<std::string>& params,
                            const std::map<std::string, std::int64_t>& constants);

}  // namespace sfv::ir
