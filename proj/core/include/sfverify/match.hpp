#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/derive.hpp"
#include "sfverify/logic.hpp"

namespace sfv::refine {

enum class MatchMode {
  /// Both sides in the simplifier's normal form; mutually exclusive arms
  /// may appear in any order.
  Normalized,
  /// Normal form, but arms must appear in the same order.
  Exact,
};

struct Divergence {
  /// Child indices from the root: statement position in a sequence, arm
  /// index in a conditional (the else branch counts as the last arm).
  std::vector<std::size_t> path;
  std::string reason;
  std::string derived;
  std::string implementation;

  std::string path_str() const;
};

struct MatchResult {
  bool matched = false;
  /// Implementation function -> digest of the derived subtree it replaces.
  std::map<std::string, std::string> matched_functions;
  std::optional<Divergence> divergence;
  std::vector<std::string> reorders;
  std::string derived_normal;  // rendered normal forms, for reports
  std::string impl_normal;
};

/// The implementation leaves the pattern in a way the matcher detects
/// (recursion, missing entry point, arity mismatch).
class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Copy rule: the body of `fn` with every call replaced by the callee's
/// body, parameters substituted by the arguments. Collects the names of the
/// functions that were inlined into `used`.
StmtPtr inline_calls(const ir::ImplProgram& p, const std::string& fn, std::vector<std::string>& used);

/// Phase 5: matches the simplified derived step against the implementation
/// entry points. Throws PatternError for pattern violations.
MatchResult structure_match(const DerivedProgram& d, const ir::ImplProgram& p, const chart::ChartDef& c,
                            const retrieve::RetrieveRelation& r, MatchMode mode = MatchMode::Normalized);

}  // namespace sfv::refine
