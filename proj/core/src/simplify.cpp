#include "sfverify/simplify.hpp"

#include <algorithm>

namespace sfv::refine {

using logic::Truth;

logic::Domain make_domain(const chart::ChartDef& c, const retrieve::RetrieveRelation& r,
                          const ir::ImplProgram& fields, bool resolve_constants) {
  logic::Domain d;
  for (const auto& rc : r.concrete_invariant) {
    d.finite[rc.field] = rc.values;
    d.labels[rc.field] = rc.labels;
  }
  std::vector<std::int64_t> tids{0};
  for (const auto& e : c.events)
    if (e.kind == chart::EventKind::Input) tids.push_back(c.event_index(e.name));
  d.finite["tid"] = tids;
  for (const ir::Record* rec : fields.records())
    for (const auto& f : rec->fields) d.sorts[rec->name + "." + f.name] = f.sort;
  d.constants = fields.constants;
  d.resolve_constants = resolve_constants;
  return d;
}

namespace {

ExprPtr field_expr(const std::string& key) {
  const auto dot = key.find('.');
  return Expr::fld(key.substr(0, dot), key.substr(dot + 1));
}

ExprPtr resolve(const ExprPtr& e, const retrieve::RetrieveRelation& r, const chart::ChartDef& c) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Status: {
      const Expr* s = e->a.get();
      if (s && s->kind == ExprKind::StructIdent) s = s->a.get();
      const retrieve::StatusFormula* f = s ? r.formula(s->name) : nullptr;
      if (!f) return e;
      if (f->kind == retrieve::FormulaKind::ActiveFlag)
        return Expr::binary(BinOp::Gt, field_expr(f->field), Expr::lit(0));
      return Expr::binary(BinOp::Eq, field_expr(f->field), Expr::constant(f->constant));
    }
    case ExprKind::HistoryIs: {
      auto it = r.history_map.find(e->name);
      if (it == r.history_map.end()) return Expr::lit(Value::boolean(false));
      return Expr::binary(BinOp::Eq, field_expr(it->second.field), Expr::constant(ir::names::in_const(e->field)));
    }
    case ExprKind::EventLit: return Expr::lit(c.event_index(e->name));
    case ExprKind::StructIdent: return e->a;
    case ExprKind::Unary: return Expr::unary(e->uop, resolve(e->a, r, c));
    case ExprKind::Binary: return Expr::binary(e->bop, resolve(e->a, r, c), resolve(e->b, r, c));
    default: return e;
  }
}

using Facts = std::vector<ExprPtr>;

std::vector<StmtPtr> items(const StmtPtr& s) {
  if (!s) return {};
  if (s->kind == StmtKind::Seq) return s->body;
  return {s};
}

bool empty(const StmtPtr& s) { return !s || s->is_skip(); }

class Simplifier {
 public:
  Simplifier(const logic::Domain& d, const SimplifyOptions& opt, std::vector<std::string>* log)
      : d_(d), opt_(opt), log_(log) {}

  StmtPtr run(const StmtPtr& s) {
    Facts f;
    return flatten(stmt(s, f));
  }

 private:
  void note(const std::string& s) {
    if (log_) log_->push_back(s);
  }

  void kill(Facts& f, const std::string& key) {
    f.erase(std::remove_if(f.begin(), f.end(), [&](const ExprPtr& x) { return logic::reads(x).count(key) != 0; }),
            f.end());
  }

  StmtPtr stmt(const StmtPtr& s, Facts& f) {
    if (!s) return Stmt::skip();
    switch (s->kind) {
      case StmtKind::Seq: {
        std::vector<StmtPtr> out;
        for (const auto& x : s->body) out.push_back(stmt(x, f));
        return sequence(std::move(out));
      }
      case StmtKind::Assign: {
        const ExprPtr v = logic::fold(s->value, d_);
        const std::string key = s->target->kind == ExprKind::Field ? s->target->field_key() : s->target->name;
        kill(f, key);
        if (logic::constant_value(v, d_)) f.push_back(logic::canon(Expr::binary(BinOp::Eq, s->target, v), d_));
        return Stmt::assign(s->target, v, s->loc);
      }
      case StmtKind::Call: {
        f.clear();
        std::vector<ExprPtr> args;
        for (const auto& a : s->args) args.push_back(logic::fold(a, d_));
        return Stmt::call(s->callee, std::move(args), s->loc);
      }
      case StmtKind::If: return if_stmt(*s, f);
      case StmtKind::Broadcast: return s;
    }
    return s;
  }

  /// `f != c` over a finite field becomes one `f == v` arm per other value.
  std::vector<Arm> split(const Arm& a) {
    const ExprPtr& g = a.guard;
    if (g->kind != ExprKind::Binary || g->bop != BinOp::Ne || g->a->kind != ExprKind::Field) return {a};
    auto fin = d_.finite.find(g->a->field_key());
    const auto c = logic::constant_value(g->b, d_);
    if (fin == d_.finite.end() || !c || c->is_float()) return {a};
    std::vector<std::int64_t> vals = fin->second;
    std::sort(vals.rbegin(), vals.rend());
    static const std::map<std::int64_t, std::string> none;
    auto lab_it = d_.labels.find(g->a->field_key());
    const auto& labels = lab_it == d_.labels.end() ? none : lab_it->second;
    std::vector<Arm> out;
    std::string shown;
    for (auto v : vals) {
      if (v == c->as_int()) continue;
      auto lab = labels.find(v);
      ExprPtr rhs = (!d_.resolve_constants && lab != labels.end()) ? Expr::constant(lab->second) : Expr::lit(v);
      out.push_back({Expr::binary(BinOp::Eq, g->a, rhs), a.body});
      shown += (shown.empty() ? "" : " | ") + print(out.back().guard);
    }
    note("split " + print(g) + " into " + shown);
    return out;
  }

  static Facts intersect(const std::vector<Facts>& all) {
    if (all.empty()) return {};
    Facts out;
    for (const auto& x : all.front()) {
      const std::string px = print(x);
      bool everywhere = true;
      for (std::size_t i = 1; i < all.size() && everywhere; ++i)
        everywhere = std::any_of(all[i].begin(), all[i].end(), [&](const ExprPtr& y) { return print(y) == px; });
      if (everywhere) out.push_back(x);
    }
    return out;
  }

  StmtPtr if_stmt(const Stmt& s, Facts& f) {
    std::vector<Arm> arms;
    for (const auto& a : s.arms) arms.push_back({logic::canon(a.guard, d_), a.body});
    if (!s.else_body && !arms.empty()) {
      auto tail = split(arms.back());
      arms.pop_back();
      arms.insert(arms.end(), tail.begin(), tail.end());
    }
    const Facts entry = f;
    Facts ctx = f;
    std::vector<Arm> out;
    std::vector<Facts> ends;
    StmtPtr els;
    bool exhausted = false;
    for (const auto& a : arms) {
      const Truth t = logic::decide(ctx, a.guard, d_);
      if (t == Truth::False) {
        note("drop arm " + print(a.guard) + ": refuted");
        continue;
      }
      Facts fb = ctx;
      if (t == Truth::True) {
        exhausted = true;
        if (out.empty()) {
          note("inline arm " + print(a.guard) + ": implied");
          StmtPtr body = stmt(a.body, fb);
          f = fb;
          return body;
        }
        if (opt_.normalize) {
          note("arm " + print(a.guard) + " is implied; written as else");
          els = stmt(a.body, fb);
        } else {
          fb.push_back(a.guard);
          out.push_back({a.guard, stmt(a.body, fb)});
        }
        ends.push_back(fb);
        break;
      }
      fb.push_back(a.guard);
      out.push_back({a.guard, stmt(a.body, fb)});
      ends.push_back(fb);
      ctx.push_back(logic::negate(a.guard, d_));
    }
    if (!exhausted) {
      const bool reachable = logic::satisfiable(ctx, d_);
      if (s.else_body) {
        if (!reachable) {
          note("drop else: refuted");
        } else {
          Facts fb = ctx;
          els = stmt(s.else_body, fb);
          if (out.empty()) {
            f = fb;
            return els;
          }
          ends.push_back(fb);
        }
      } else if (out.empty()) {
        f = ctx;
        return Stmt::skip();
      } else if (reachable) {
        ends.push_back(ctx);
      }
    }
    f = intersect(ends);
    if (out.empty()) return els ? els : Stmt::skip();
    if (opt_.normalize) tidy(out, els, entry);
    if (out.empty()) return els ? els : Stmt::skip();
    return Stmt::if_chain(std::move(out), empty(els) ? nullptr : els, s.loc);
  }

  void tidy(std::vector<Arm>& arms, StmtPtr& els, const Facts& entry) {
    if (empty(els)) els = nullptr;
    if (!els) {
      while (!arms.empty() && empty(arms.back().body)) arms.pop_back();
      for (std::size_t i = 0; i < arms.size();) {
        if (!empty(arms[i].body)) {
          ++i;
          continue;
        }
        Facts with = entry;
        with.push_back(arms[i].guard);
        bool exclusive = true;
        for (std::size_t j = i + 1; j < arms.size() && exclusive; ++j)
          exclusive = logic::decide(with, arms[j].guard, d_) == Truth::False;
        if (exclusive) arms.erase(arms.begin() + static_cast<long>(i));
        else ++i;
      }
    }
    if (els) {
      const auto inner = items(els);
      if (inner.size() == 1 && inner[0]->kind == StmtKind::If) {
        arms.insert(arms.end(), inner[0]->arms.begin(), inner[0]->arms.end());
        els = inner[0]->else_body;
        if (empty(els)) els = nullptr;
      }
    }
  }

  const logic::Domain& d_;
  SimplifyOptions opt_;
  std::vector<std::string>* log_;
};

}  // namespace

StmtPtr resolve_structure(const StmtPtr& s, const retrieve::RetrieveRelation& r, const chart::ChartDef& c) {
  if (!s) return s;
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> body;
      for (const auto& x : s->body) body.push_back(resolve_structure(x, r, c));
      return Stmt::seq(std::move(body), s->loc);
    }
    case StmtKind::Assign: return Stmt::assign(s->target, resolve(s->value, r, c), s->loc);
    case StmtKind::If: {
      std::vector<Arm> arms;
      for (const auto& a : s->arms) arms.push_back({resolve(a.guard, r, c), resolve_structure(a.body, r, c)});
      return Stmt::if_chain(std::move(arms), resolve_structure(s->else_body, r, c), s->loc);
    }
    case StmtKind::Call: {
      std::vector<ExprPtr> args;
      for (const auto& a : s->args) args.push_back(resolve(a, r, c));
      return Stmt::call(s->callee, std::move(args), s->loc);
    }
    case StmtKind::Broadcast: return s;
  }
  return s;
}

StmtPtr simplify_stmt(const StmtPtr& s, const logic::Domain& d, const SimplifyOptions& opt,
                      std::vector<std::string>* log) {
  return Simplifier(d, opt, log).run(s);
}

DerivedProgram simplify(const DerivedProgram& in, const chart::ChartDef& c, const retrieve::RetrieveRelation& r) {
  DerivedProgram out = in;
  const logic::Domain d = make_domain(c, r, in.program, false);
  const StmtPtr resolved = resolve_structure(in.step_body, r, c);
  out.phase_log.push_back({4, "fold structure lookups through the retrieve relation", digest(in.step_body),
                           digest(resolved)});
  std::vector<std::string> log;
  out.step_body = simplify_stmt(resolved, d, {}, &log);
  std::string prev = digest(resolved);
  for (const auto& line : log) {
    const std::string next = digest(prev + line);
    out.phase_log.push_back({4, line, prev, next});
    prev = next;
  }
  out.phase_log.push_back({4, "simplified step body", digest(resolved), digest(out.step_body)});
  out.simplified = true;
  out.install();
  return out;
}

}  // namespace sfv::refine
