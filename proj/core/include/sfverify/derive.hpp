#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/chart.hpp"
#include "sfverify/impl_ir.hpp"
#include "sfverify/retrieve.hpp"

namespace sfv::refine {

struct PhaseLogEntry {
  int phase = 0;
  std::string transformation;
  std::string before;  // digest
  std::string after;   // digest

  std::string str() const;
};

/// Normal-form program: `init ; loop { inputs ; step_body ; outputs }`.
/// `program` carries the concrete records and constants with `init` and
/// `step_body` installed as `<Chart>_initialize` and `<Chart>_output(tid)`,
/// so the interpreter can run it directly.
struct DerivedProgram {
  ir::ImplProgram program;
  StmtPtr init;
  StmtPtr step_body;
  std::vector<PhaseLogEntry> phase_log;
  bool simplified = false;

  /// Reinstalls `init` and `step_body` into `program`.
  void install();
};

/// A chart feature the derivation cannot unfold (broadcasts nested past the
/// derivation bound, junction cycles). Reported as NONCONFORMANT.
class DeriveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Phases 1 to 3: rewrite chart variables through the relation, fix the
/// init-then-loop normal form, and unfold the chart semantics into one
/// conditional/assignment tree over the concrete fields. Structure lookups
/// (`ss(X)`, `event(E)`, `history(H, X)`) remain symbolic. `concrete`
/// supplies the record layout and constants of the concrete state.
DerivedProgram derive_step(const chart::ChartDef& c, const retrieve::RetrieveRelation& r,
                           const ir::ImplProgram& concrete, int broadcast_depth = 8);

}  // namespace sfv::refine
