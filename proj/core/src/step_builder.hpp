#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"
#include "sfverify/chart.hpp"

namespace sfv::detail {

/// Raised when the chart cannot be turned into a step program.
class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Emission {
  /// Structure lookups stay symbolic (`ss(X)`, `event(E)`, `history(H, X)`)
  /// and every conditional is binary with an explicit complement arm.
  Symbolic,
  /// The generator's concrete encoding: field tests, else-if chains.
  Concrete,
};

/// Replaces chart variables in every action and condition by the given
/// record fields ("u" -> U.u).
chart::ChartDef rewrite_variables(const chart::ChartDef& c, const std::map<std::string, ExprPtr>& fields);

/// Builds the body of one `output(tid)` call by unfolding the chart
/// semantics over the encoding fields. The same unfolding serves both the
/// derivation and the reference generator; the emission style decides how
/// structure lookups and conditionals are written.
class StepBuilder {
 public:
  StepBuilder(const chart::ChartDef& c, Emission emission, int broadcast_depth = 8);

  /// One chart execution for the event held in `tid`, followed by the
  /// copy of block outputs into Y.
  StmtPtr output_body();

  /// Human-readable notes on what was unfolded, in order.
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  using Cont = std::function<StmtPtr()>;
  using Builder = std::function<StmtPtr(Cont)>;

  struct Frame {
    std::optional<std::string> event;  // static event; nullopt: the `tid` parameter
    int depth = 0;
    Cont end;
    /// Statuses fixed at the start of a nested frame: the broadcasting
    /// context and its ancestors are active, their sequential siblings not.
    /// Only valid until the frame's first action can have changed them.
    std::map<std::string, bool> known;
  };

  struct Case {
    ExprPtr guard;
    Builder body;
  };

  StmtPtr frame(const Frame& fr);
  StmtPtr choose(std::vector<Case> cases, Builder fallback, Cont k);
  StmtPtr actions(const StmtPtr& a, const std::string& ctx, const Frame& fr, Cont k);
  StmtPtr action_list(const std::vector<StmtPtr>& xs, std::size_t i, const std::string& ctx, const Frame& fr,
                      Cont k);

  using Path = std::vector<const chart::TransitionDef*>;
  using Found = std::function<StmtPtr(const Path&, Cont)>;
  StmtPtr search(const std::vector<const chart::TransitionDef*>& ts, std::size_t i, const std::string& scope,
                 Path path, std::vector<std::string> visited, const Frame& fr, Found found, Builder fail, Cont k);

  StmtPtr exec_children(const std::string& scope, const Frame& fr, Cont k);
  StmtPtr exec_parallel(const std::vector<chart::StateId>& kids, std::size_t i, const Frame& fr, Cont k);
  StmtPtr exec_state(const chart::StateId& s, const Frame& fr, Cont k);
  StmtPtr state_body(const chart::StateId& s, std::size_t i, const Frame& fr, Cont k);
  StmtPtr take(const Path& path, const std::string& scope, const Frame& fr, Cont k);
  StmtPtr take_from(const Path& path, std::size_t j, const std::string& scope, const Frame& fr, Cont k);
  StmtPtr enter_chain(const std::vector<chart::StateId>& chain, std::size_t j, const chart::StateId& target,
                      const Frame& fr, Cont k);
  StmtPtr enter_parallel(const std::vector<chart::StateId>& kids, std::size_t i, const Frame& fr, Cont k);
  StmtPtr enter_children(const std::string& scope, const Frame& fr, Cont k);
  StmtPtr enter_one(const chart::StateId& s, const Frame& fr, Cont k);
  StmtPtr exit_state(const chart::StateId& s, bool known_active, const Frame& fr, Cont k);
  StmtPtr exit_children(const chart::StateId& s, const Frame& fr, Cont k);
  StmtPtr exit_parallel(const std::vector<chart::StateId>& kids, std::size_t i, const Frame& fr, Cont k);

  ExprPtr status(const std::string& id) const;
  ExprPtr status_in(const std::string& id, const Frame& fr) const;
  std::map<std::string, bool> known_at(const std::string& ctx) const;
  ExprPtr inactive(const std::string& id) const;
  ExprPtr history_is(const chart::StateId& h, const chart::StateId& child) const;
  ExprPtr event_test(const std::string& ev, const Frame& fr) const;
  ExprPtr guard(const chart::TransitionDef& t, const Frame& fr) const;
  StmtPtr set_status(const chart::StateId& s, bool on) const;
  std::vector<chart::StateId> dispatch_order(const std::string& scope) const;

  const chart::ChartDef& c_;
  Emission emission_;
  bool cps_;
  bool condition_sends_ = false;
  int depth_limit_;
  std::vector<std::string> notes_;
};

}  // namespace sfv::detail
