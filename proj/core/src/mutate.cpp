#include "sfverify/mutate.hpp"

#include <functional>

namespace sfv::refine {

std::string to_string(MutationKind k) {
  switch (k) {
    case MutationKind::ConstantSwap: return "constant-swap";
    case MutationKind::GuardFlip: return "guard-flip";
    case MutationKind::DropAssignment: return "drop-assignment";
    case MutationKind::DropBranch: return "drop-branch";
  }
  return "?";
}

namespace {

std::string family(const std::string& name) {
  if (name.rfind("IN_", 0) == 0) return "IN_";
  if (name.rfind("EV_", 0) == 0) return "EV_";
  return {};
}

/// Rebuilds a statement with the `target`-th site of one kind mutated.
/// `counter` counts the sites seen so far; `what` receives a description.
class SiteRewriter {
 public:
  SiteRewriter(const ir::ImplProgram& p, MutationKind kind, std::size_t target)
      : p_(p), kind_(kind), target_(target) {}

  StmtPtr stmt(const StmtPtr& s) {
    if (!s) return s;
    switch (s->kind) {
      case StmtKind::Seq: {
        std::vector<StmtPtr> body;
        for (const auto& x : s->body) {
          const StmtPtr y = stmt(x);
          if (!y->is_skip()) body.push_back(y);
        }
        return Stmt::seq(std::move(body), s->loc);
      }
      case StmtKind::Assign:
        if (kind_ == MutationKind::DropAssignment && hit()) {
          what = "drop `" + print(s->target) + " = " + print(s->value) + "`";
          return Stmt::skip();
        }
        return Stmt::assign(s->target, expr(s->value), s->loc);
      case StmtKind::If: {
        std::vector<Arm> arms;
        for (const auto& a : s->arms) {
          if (kind_ == MutationKind::DropBranch && hit()) {
            what = "drop arm `if (" + print(a.guard) + ")`";
            continue;
          }
          ExprPtr g = a.guard;
          if (kind_ == MutationKind::GuardFlip && hit()) {
            g = Expr::unary(UnOp::Not, a.guard);
            what = "negate guard `" + print(a.guard) + "`";
          } else {
            g = expr(g);
          }
          arms.push_back({g, stmt(a.body)});
        }
        StmtPtr else_body = s->else_body;
        if (else_body && kind_ == MutationKind::DropBranch && hit()) {
          what = "drop else branch of `if (" + print(s->arms.front().guard) + ")`";
          else_body = nullptr;
        } else {
          else_body = stmt(else_body);
        }
        if (arms.empty()) return else_body ? else_body : Stmt::skip();
        return Stmt::if_chain(std::move(arms), else_body, s->loc);
      }
      case StmtKind::Call: {
        std::vector<ExprPtr> args;
        for (const auto& a : s->args) args.push_back(expr(a));
        return Stmt::call(s->callee, std::move(args), s->loc);
      }
      case StmtKind::Broadcast: return s;
    }
    return s;
  }

  std::string what;

 private:
  ExprPtr expr(const ExprPtr& e) {
    if (!e) return e;
    switch (e->kind) {
      case ExprKind::Const: {
        if (kind_ != MutationKind::ConstantSwap) return e;
        const std::string fam = family(e->name);
        auto mine = p_.constants.find(e->name);
        if (fam.empty() || mine == p_.constants.end()) return e;
        // The replacement: the first constant of the family, in name order,
        // whose value differs.
        for (const auto& [name, v] : p_.constants) {
          if (family(name) != fam || v == mine->second) continue;
          if (hit()) {
            what = "replace " + e->name + " by " + name;
            return Expr::constant(name);
          }
          return e;
        }
        return e;
      }
      case ExprKind::Unary: return Expr::unary(e->uop, expr(e->a));
      case ExprKind::Binary: {
        ExprPtr a = expr(e->a);
        return Expr::binary(e->bop, a, expr(e->b));
      }
      default: return e;
    }
  }

  bool hit() { return count++ == target_; }

 public:
  std::size_t count = 0;

 private:
  const ir::ImplProgram& p_;
  MutationKind kind_;
  std::size_t target_;
};

}  // namespace

std::vector<Mutant> mutants(const ir::ImplProgram& p) {
  std::vector<Mutant> out;
  for (MutationKind kind : {MutationKind::ConstantSwap, MutationKind::GuardFlip, MutationKind::DropAssignment,
                            MutationKind::DropBranch}) {
    std::size_t n = 0;
    for (const auto& fn : p.function_order) {
      if (fn == p.init_function()) continue;
      const ir::FunctionDef& f = *p.function(fn);
      for (std::size_t target = 0;; ++target) {
        SiteRewriter rw(p, kind, target);
        StmtPtr body = rw.stmt(f.body);
        if (rw.what.empty()) break;
        Mutant m;
        m.id = to_string(kind) + "-" + std::to_string(++n);
        m.kind = kind;
        m.function = fn;
        m.description = rw.what;
        m.program = p;
        m.program.functions[fn].body = flatten(body);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

}  // namespace sfv::refine
