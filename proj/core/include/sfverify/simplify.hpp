#pragma once

#include <string>
#include <vector>

#include "sfverify/derive.hpp"
#include "sfverify/logic.hpp"

namespace sfv::refine {

/// Decision-procedure domain for programs over `fields`: invariant ranges
/// of the relation, `tid` over {0} and the input event ids, field sorts and
/// constants.
logic::Domain make_domain(const chart::ChartDef& c, const retrieve::RetrieveRelation& r,
                          const ir::ImplProgram& fields, bool resolve_constants);

/// Replaces structure lookups: `ss(X)` by X's status formula, `history(H,
/// X)` by `was_H == IN_X`, `event(E)` by E's id, `states(X).identifier` by X.
StmtPtr resolve_structure(const StmtPtr& s, const retrieve::RetrieveRelation& r, const chart::ChartDef& c);

struct SimplifyOptions {
  /// Matching normal form: implied final arms become `else`, empty arms
  /// and elses are dropped, `else { if ... }` joins the enclosing chain.
  bool normalize = false;
};

/// Guard canonicalization, assumption propagation, infeasible-arm removal
/// and guard splitting over finite fields. Appends one line per rewrite to
/// `log` when given.
StmtPtr simplify_stmt(const StmtPtr& s, const logic::Domain& d, const SimplifyOptions& opt = {},
                      std::vector<std::string>* log = nullptr);

/// Phase 4 on a derived program.
DerivedProgram simplify(const DerivedProgram& d, const chart::ChartDef& c, const retrieve::RetrieveRelation& r);

}  // namespace sfv::refine
