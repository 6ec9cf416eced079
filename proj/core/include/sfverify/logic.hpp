#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"

namespace sfv::logic {

/// What the decision procedure knows about the terms of a guard.
struct Domain {
  /// Terms ranging over a small finite set, keyed by printed form
  /// ("DWork.is_c1", "tid").
  std::map<std::string, std::vector<std::int64_t>> finite;
  /// Names for values of finite terms, used when splitting guards.
  std::map<std::string, std::map<std::int64_t, std::string>> labels;
  /// Sorts of field terms; integer sorts enable integer tightening and
  /// byte sorts carry the implicit [0, 255] range.
  std::map<std::string, Sort> sorts;
  std::map<std::string, std::int64_t> constants;
  /// Replace named constants by their values while canonicalizing.
  bool resolve_constants = false;
  /// Disjunct cap for the DNF conversion.
  std::size_t dnf_cap = 256;
};

/// Rewrites a guard into canonical form: comparisons with the constant on
/// the right, C-boolean idioms (`(a < b) != 0`) removed, negations pushed
/// to the atoms, byte-field sign tests written as `!= 0` / `== 0`, literal
/// subterms folded. Non-boolean expressions become `e != 0`.
ExprPtr canon(const ExprPtr& g, const Domain& d);

/// canon of the logical negation of `g`.
ExprPtr negate(const ExprPtr& g, const Domain& d);

/// Folds literal arithmetic (and constants, when resolving) in a value
/// expression without changing its meaning.
ExprPtr fold(const ExprPtr& e, const Domain& d);

/// True if the expression is boolean-valued (comparison or connective).
bool is_boolean(const ExprPtr& e);

enum class Truth { True, False, Unknown };

/// False only when the conjunction is certainly unsatisfiable.
bool satisfiable(const std::vector<ExprPtr>& conj, const Domain& d);

/// Whether `facts` imply `g` (True), its negation (False), or neither.
Truth decide(const std::vector<ExprPtr>& facts, const ExprPtr& g, const Domain& d);

/// Printed keys of the fields and parameters an expression reads.
std::set<std::string> reads(const ExprPtr& e);

/// Value of a constant-valued expression (literal, or named constant known
/// to the domain).
std::optional<Value> constant_value(const ExprPtr& e, const Domain& d);

}  // namespace sfv::logic
