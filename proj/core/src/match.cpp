#include "sfverify/match.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sfverify/simplify.hpp"

namespace sfv::refine {

std::string Divergence::path_str() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < path.size(); ++i) out << (i ? "," : "") << path[i];
  out << ']';
  return out.str();
}

namespace {

constexpr int kMaxInlineDepth = 32;

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& env) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Param: {
      auto it = env.find(e->name);
      return it == env.end() ? e : it->second;
    }
    case ExprKind::Unary: return Expr::unary(e->uop, substitute(e->a, env));
    case ExprKind::Binary: return Expr::binary(e->bop, substitute(e->a, env), substitute(e->b, env));
    default: return e;
  }
}

StmtPtr expand(const ir::ImplProgram& p, const StmtPtr& s, const std::map<std::string, ExprPtr>& env,
               std::vector<std::string>& stack, std::vector<std::string>& used) {
  if (!s) return s;
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> body;
      for (const auto& x : s->body) body.push_back(expand(p, x, env, stack, used));
      return Stmt::seq(std::move(body), s->loc);
    }
    case StmtKind::Assign: return Stmt::assign(s->target, substitute(s->value, env), s->loc);
    case StmtKind::If: {
      std::vector<Arm> arms;
      for (const auto& a : s->arms) arms.push_back({substitute(a.guard, env), expand(p, a.body, env, stack, used)});
      return Stmt::if_chain(std::move(arms), expand(p, s->else_body, env, stack, used), s->loc);
    }
    case StmtKind::Call: {
      const ir::FunctionDef* f = p.function(s->callee);
      if (!f) throw PatternError("call to undefined function " + s->callee);
      if (f->params.size() != s->args.size()) throw PatternError("arity mismatch calling " + s->callee);
      if (std::find(stack.begin(), stack.end(), f->name) != stack.end() ||
          stack.size() > static_cast<std::size_t>(kMaxInlineDepth))
        throw PatternError("recursive call to " + f->name);
      std::map<std::string, ExprPtr> inner;
      for (std::size_t i = 0; i < f->params.size(); ++i) inner[f->params[i]] = substitute(s->args[i], env);
      if (std::find(used.begin(), used.end(), f->name) == used.end()) used.push_back(f->name);
      stack.push_back(f->name);
      StmtPtr body = expand(p, f->body, inner, stack, used);
      stack.pop_back();
      return body;
    }
    case StmtKind::Broadcast: throw PatternError("event broadcast in implementation");
  }
  return s;
}

std::vector<StmtPtr> items(const StmtPtr& s) {
  if (!s || s->is_skip()) return {};
  if (s->kind == StmtKind::Seq) return s->body;
  return {s};
}

std::string snippet(const StmtPtr& s) {
  std::string text = print(s);
  if (text.empty()) return "(nothing)";
  std::istringstream in(text);
  std::string line, out;
  int n = 0;
  while (std::getline(in, line) && n < 12) {
    out += line + "\n";
    ++n;
  }
  if (std::getline(in, line)) out += "...\n";
  out.pop_back();
  return out;
}

std::string snippet(const std::vector<StmtPtr>& xs, std::size_t from) {
  if (from >= xs.size()) return "(nothing)";
  std::vector<StmtPtr> rest(xs.begin() + static_cast<long>(from), xs.end());
  return snippet(sequence(rest));
}

class Matcher {
 public:
  Matcher(const logic::Domain& d, MatchMode mode) : d_(d), mode_(mode) {}

  std::optional<Divergence> lists(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b,
                                  std::vector<std::size_t> path) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      auto sub = path;
      sub.push_back(i);
      if (auto dv = stmts(a[i], b[i], sub)) return dv;
    }
    if (a.size() != b.size()) {
      path.push_back(n);
      return Divergence{path,
                        a.size() > b.size() ? "implementation is missing statements" : "implementation has extra statements",
                        snippet(a, n), snippet(b, n)};
    }
    return std::nullopt;
  }

  std::vector<std::string> reorders;

 private:
  std::optional<Divergence> stmts(const StmtPtr& a, const StmtPtr& b, const std::vector<std::size_t>& path) {
    if (a->kind != b->kind) return Divergence{path, "different statement kinds", snippet(a), snippet(b)};
    switch (a->kind) {
      case StmtKind::Assign:
        if (a->target->field_key() != b->target->field_key())
          return Divergence{path, "assignment to a different field", snippet(a), snippet(b)};
        if (print(a->value) != print(b->value))
          return Divergence{path, "different assigned value", snippet(a), snippet(b)};
        return std::nullopt;
      case StmtKind::If: return ifs(*a, *b, a, b, path);
      case StmtKind::Seq: return lists(items(a), items(b), path);
      default: return Divergence{path, "statement outside the pattern", snippet(a), snippet(b)};
    }
  }

  std::optional<Divergence> ifs(const Stmt& a, const Stmt& b, const StmtPtr& pa, const StmtPtr& pb,
                                const std::vector<std::size_t>& path) {
    if (a.arms.size() != b.arms.size())
      return Divergence{path, "conditionals have " + std::to_string(a.arms.size()) + " and " +
                                  std::to_string(b.arms.size()) + " guarded arms",
                        snippet(pa), snippet(pb)};
    if (!a.else_body != !b.else_body)
      return Divergence{path, a.else_body ? "implementation lacks the else branch" : "implementation has an extra else branch",
                        snippet(pa), snippet(pb)};
    std::optional<Divergence> first;
    const std::size_t saved = reorders.size();
    for (std::size_t i = 0; i < a.arms.size() && !first; ++i) first = arm(a.arms[i], b.arms[i], path, i);
    if (!first) return else_branch(a, b, path);
    reorders.resize(saved);
    if (mode_ == MatchMode::Exact) return first;
    // Look for a permutation of the implementation's arms that matches.
    std::vector<std::size_t> perm;  // derived arm i <- implementation arm perm[i]
    std::vector<bool> taken(b.arms.size(), false);
    for (std::size_t i = 0; i < a.arms.size(); ++i) {
      bool found = false;
      for (std::size_t j = 0; j < b.arms.size() && !found; ++j) {
        if (taken[j]) continue;
        const std::size_t before = reorders.size();
        if (!arm(a.arms[i], b.arms[j], path, i)) {
          taken[j] = true;
          perm.push_back(j);
          found = true;
        } else {
          reorders.resize(before);
        }
      }
      if (!found) {
        reorders.resize(saved);
        return first;
      }
    }
    if (!order_independent(b.arms, perm)) {
      reorders.resize(saved);
      return first;
    }
    if (auto dv = else_branch(a, b, path)) return dv;
    const std::string at = Divergence{path, {}, {}, {}}.path_str();
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != i)
        reorders.push_back("at " + at + ": arm " + print(b.arms[perm[i]].guard) + " moved from " +
                           std::to_string(perm[i]) + " to " + std::to_string(i));
    return std::nullopt;
  }

  /// Whether the chain `arms` selects the same arm as its permutation
  /// `perm` for every input. Two chains can only disagree on an input when
  /// two arms that swapped places both hold and every arm ahead of either
  /// of them, in its own chain, fails.
  bool order_independent(const std::vector<Arm>& arms, const std::vector<std::size_t>& perm) const {
    std::vector<std::size_t> pos(arms.size());
    for (std::size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = i;
    for (std::size_t x = 0; x < arms.size(); ++x)
      for (std::size_t y = x + 1; y < arms.size(); ++y) {
        if (pos[x] < pos[y]) continue;
        std::vector<ExprPtr> conj{arms[x].guard, arms[y].guard};
        for (std::size_t k = 0; k < x; ++k) conj.push_back(logic::negate(arms[k].guard, d_));
        for (std::size_t k = 0; k < pos[y]; ++k) conj.push_back(logic::negate(arms[perm[k]].guard, d_));
        if (logic::satisfiable(conj, d_)) return false;
      }
    return true;
  }

  std::optional<Divergence> arm(const Arm& x, const Arm& y, const std::vector<std::size_t>& path, std::size_t i) {
    auto sub = path;
    sub.push_back(i);
    if (print(x.guard) != print(y.guard))
      return Divergence{sub, "different guard", "if (" + print(x.guard) + ")", "if (" + print(y.guard) + ")"};
    return lists(items(x.body), items(y.body), sub);
  }

  std::optional<Divergence> else_branch(const Stmt& a, const Stmt& b, const std::vector<std::size_t>& path) {
    if (!a.else_body) return std::nullopt;
    auto sub = path;
    sub.push_back(a.arms.size());
    return lists(items(a.else_body), items(b.else_body), sub);
  }

  const logic::Domain& d_;
  MatchMode mode_;
};

}  // namespace

StmtPtr inline_calls(const ir::ImplProgram& p, const std::string& fn, std::vector<std::string>& used) {
  const ir::FunctionDef* f = p.function(fn);
  if (!f) throw PatternError("missing function " + fn);
  std::vector<std::string> stack{fn};
  return expand(p, f->body, {}, stack, used);
}

MatchResult structure_match(const DerivedProgram& d, const ir::ImplProgram& p, const chart::ChartDef& c,
                            const retrieve::RetrieveRelation& r, MatchMode mode) {
  MatchResult res;
  const std::string out_fn = p.output_function();
  if (out_fn.empty()) throw PatternError("no output function (" + p.name + "_output or output)");
  const ir::FunctionDef* of = p.function(out_fn);
  if (of->params.size() > 1) throw PatternError(out_fn + " takes more than the event id parameter");

  // initialize: compare the states it establishes.
  {
    const ir::ImplState mine = ir::Interpreter(d.program).initial();
    ir::ImplState theirs;
    try {
      theirs = ir::Interpreter(p).initial();
    } catch (const ir::ImplError& e) {
      throw PatternError(std::string("initialize: ") + e.what());
    }
    for (const auto& [k, v] : mine.fields) {
      const Value w = theirs.get(k);
      if (v != w) {
        res.divergence = Divergence{{}, "initialize leaves " + k + " = " + w.str() + ", expected " + v.str(),
                                    k + " = " + v.str(), k + " = " + w.str()};
        return res;
      }
    }
  }

  std::vector<std::string> used;
  StmtPtr impl = inline_calls(p, out_fn, used);
  if (of->params.size() == 1 && of->params[0] != "tid") {
    std::map<std::string, ExprPtr> env{{of->params[0], Expr::param("tid")}};
    std::vector<std::string> stack{out_fn};
    impl = expand(p, impl, env, stack, used);
  }

  const logic::Domain nd = make_domain(c, r, p, true);
  const SimplifyOptions norm{true};
  const StmtPtr dn = simplify_stmt(resolve_structure(d.step_body, r, c), nd, norm);
  const StmtPtr pn = simplify_stmt(impl, nd, norm);
  res.derived_normal = print(dn);
  res.impl_normal = print(pn);

  Matcher m(nd, mode);
  if (auto dv = m.lists(items(dn), items(pn), {})) {
    res.divergence = dv;
    return res;
  }
  res.reorders = m.reorders;
  res.matched = true;
  res.matched_functions[out_fn] = digest(dn);
  if (const std::string init = p.init_function(); !init.empty()) res.matched_functions[init] = digest(d.init);
  for (const auto& fn : used) res.matched_functions[fn] = digest(p.function(fn)->body);
  return res;
}

}  // namespace sfv::refine
