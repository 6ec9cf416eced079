#include "sfverify/logic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfv::logic {

namespace {

ExprPtr bool_lit(bool b) { return Expr::lit(Value::boolean(b)); }

bool is_connective(BinOp op) { return op == BinOp::And || op == BinOp::Or; }

std::optional<Sort> sort_of(const ExprPtr& e, const Domain& d) {
  if (e->kind != ExprKind::Field) return std::nullopt;
  auto it = d.sorts.find(e->field_key());
  if (it == d.sorts.end()) return std::nullopt;
  return it->second;
}

ExprPtr canon_rec(const ExprPtr& g, const Domain& d);
ExprPtr negate_rec(const ExprPtr& g, const Domain& d);

ExprPtr make_and(ExprPtr a, ExprPtr b) {
  if (a->is_literal()) return a->value.truthy() ? b : bool_lit(false);
  if (b->is_literal()) return b->value.truthy() ? a : bool_lit(false);
  return Expr::binary(BinOp::And, a, b);
}

ExprPtr make_or(ExprPtr a, ExprPtr b) {
  if (a->is_literal()) return a->value.truthy() ? bool_lit(true) : b;
  if (b->is_literal()) return b->value.truthy() ? bool_lit(true) : a;
  return Expr::binary(BinOp::Or, a, b);
}

ExprPtr canon_cmp(BinOp op, ExprPtr l, ExprPtr r, const Domain& d) {
  l = fold(l, d);
  r = fold(r, d);
  if (constant_value(l, d) && !constant_value(r, d)) {
    std::swap(l, r);
    op = mirror_comparison(op);
  }
  const auto lv = constant_value(l, d);
  const auto rv = constant_value(r, d);
  if (lv && rv) return Expr::lit(apply(op, *lv, *rv));
  if (rv && is_boolean(l) && !rv->is_float()) {
    const std::int64_t v = rv->as_int();
    if ((op == BinOp::Ne && v == 0) || (op == BinOp::Eq && v == 1)) return canon_rec(l, d);
    if ((op == BinOp::Eq && v == 0) || (op == BinOp::Ne && v == 1)) return negate_rec(l, d);
  }
  if (rv && !rv->is_float() && sort_of(l, d) == Sort::Byte) {
    const std::int64_t v = rv->as_int();
    if ((op == BinOp::Gt && v == 0) || (op == BinOp::Ge && v == 1)) op = BinOp::Ne, r = Expr::lit(0);
    else if ((op == BinOp::Le && v == 0) || (op == BinOp::Lt && v == 1)) op = BinOp::Eq, r = Expr::lit(0);
  }
  return Expr::binary(op, l, r);
}

ExprPtr canon_rec(const ExprPtr& g, const Domain& d) {
  switch (g->kind) {
    case ExprKind::Literal: return bool_lit(g->value.truthy());
    case ExprKind::Unary:
      if (g->uop == UnOp::Not) return negate_rec(g->a, d);
      break;
    case ExprKind::Binary:
      if (g->bop == BinOp::And) return make_and(canon_rec(g->a, d), canon_rec(g->b, d));
      if (g->bop == BinOp::Or) return make_or(canon_rec(g->a, d), canon_rec(g->b, d));
      if (is_comparison(g->bop)) return canon_cmp(g->bop, g->a, g->b, d);
      break;
    default: break;
  }
  const ExprPtr e = fold(g, d);
  if (auto v = constant_value(e, d)) return bool_lit(v->truthy());
  return canon_cmp(BinOp::Ne, e, Expr::lit(0), d);
}

ExprPtr negate_rec(const ExprPtr& g, const Domain& d) {
  switch (g->kind) {
    case ExprKind::Literal: return bool_lit(!g->value.truthy());
    case ExprKind::Unary:
      if (g->uop == UnOp::Not) return canon_rec(g->a, d);
      break;
    case ExprKind::Binary:
      if (g->bop == BinOp::And) return make_or(negate_rec(g->a, d), negate_rec(g->b, d));
      if (g->bop == BinOp::Or) return make_and(negate_rec(g->a, d), negate_rec(g->b, d));
      if (is_comparison(g->bop)) return canon_cmp(negate_comparison(g->bop), g->a, g->b, d);
      break;
    default: break;
  }
  const ExprPtr e = fold(g, d);
  if (auto v = constant_value(e, d)) return bool_lit(!v->truthy());
  return canon_cmp(BinOp::Eq, e, Expr::lit(0), d);
}

// ---- decision procedure ---------------------------------------------------

using Conj = std::vector<ExprPtr>;
using Dnf = std::vector<Conj>;

/// Returns false when the disjunct count would exceed the cap.
bool to_dnf(const ExprPtr& f, Dnf& out, std::size_t cap) {
  if (f->is_literal()) {
    out.clear();
    if (f->value.truthy()) out.push_back({});
    return true;
  }
  if (f->kind == ExprKind::Binary && f->bop == BinOp::Or) {
    Dnf a, b;
    if (!to_dnf(f->a, a, cap) || !to_dnf(f->b, b, cap)) return false;
    if (a.size() + b.size() > cap) return false;
    out = std::move(a);
    out.insert(out.end(), b.begin(), b.end());
    return true;
  }
  if (f->kind == ExprKind::Binary && f->bop == BinOp::And) {
    Dnf a, b;
    if (!to_dnf(f->a, a, cap) || !to_dnf(f->b, b, cap)) return false;
    if (a.size() * b.size() > cap) return false;
    out.clear();
    for (const auto& x : a)
      for (const auto& y : b) {
        Conj c = x;
        c.insert(c.end(), y.begin(), y.end());
        out.push_back(std::move(c));
      }
    return true;
  }
  out = {{f}};
  return true;
}

struct Bound {
  double v = 0;
  bool strict = false;
  bool set = false;
};

bool holds(BinOp op, std::int64_t x, double c) {
  const double xd = static_cast<double>(x);
  switch (op) {
    case BinOp::Lt: return xd < c;
    case BinOp::Le: return xd <= c;
    case BinOp::Gt: return xd > c;
    case BinOp::Ge: return xd >= c;
    case BinOp::Eq: return xd == c;
    case BinOp::Ne: return xd != c;
    default: return true;
  }
}

bool interval_sat(const std::vector<std::pair<BinOp, double>>& cs, bool integer, bool byte) {
  Bound lo, hi;
  std::set<double> excl;
  auto raise = [&](double v, bool strict) {
    if (!lo.set || v > lo.v || (v == lo.v && strict && !lo.strict)) lo = {v, strict, true};
  };
  auto lower = [&](double v, bool strict) {
    if (!hi.set || v < hi.v || (v == hi.v && strict && !hi.strict)) hi = {v, strict, true};
  };
  if (byte) {
    raise(0, false);
    lower(255, false);
  }
  for (const auto& [op, v] : cs) {
    switch (op) {
      case BinOp::Eq: raise(v, false); lower(v, false); break;
      case BinOp::Ne: excl.insert(v); break;
      case BinOp::Lt: lower(v, true); break;
      case BinOp::Le: lower(v, false); break;
      case BinOp::Gt: raise(v, true); break;
      case BinOp::Ge: raise(v, false); break;
      default: break;
    }
  }
  if (integer) {
    if (!lo.set || !hi.set) return true;
    const double l = lo.strict ? std::floor(lo.v) + 1 : std::ceil(lo.v);
    const double h = hi.strict ? std::ceil(hi.v) - 1 : std::floor(hi.v);
    if (l > h) return false;
    if (h - l + 1 > static_cast<double>(excl.size())) return true;
    for (double x = l; x <= h; x += 1)
      if (!excl.count(x)) return true;
    return false;
  }
  if (lo.set && hi.set) {
    if (lo.v > hi.v) return false;
    if (lo.v == hi.v) return !lo.strict && !hi.strict && !excl.count(lo.v);
  }
  return true;
}

bool is_integer_term(const ExprPtr& t, const Domain& d) {
  if (t->kind == ExprKind::Param) return true;
  auto s = sort_of(t, d);
  return s && *s != Sort::Float;
}

bool conj_sat(const Conj& atoms, const Domain& d) {
  std::map<std::string, std::pair<ExprPtr, std::vector<std::pair<BinOp, double>>>> terms;
  std::map<std::pair<std::string, std::string>, std::set<BinOp>> opaque;
  for (const auto& a : atoms) {
    if (a->is_literal()) {
      if (!a->value.truthy()) return false;
      continue;
    }
    if (a->kind != ExprKind::Binary || !is_comparison(a->bop)) continue;
    if (auto v = constant_value(a->b, d)) {
      auto& slot = terms[print(a->a)];
      slot.first = a->a;
      slot.second.push_back({a->bop, v->as_double()});
      continue;
    }
    std::string l = print(a->a), r = print(a->b);
    BinOp op = a->bop;
    if (l > r) {
      std::swap(l, r);
      op = mirror_comparison(op);
    }
    auto& ops = opaque[{l, r}];
    if (ops.count(negate_comparison(op))) return false;
    ops.insert(op);
  }
  for (const auto& [key, slot] : terms) {
    const auto& cs = slot.second;
    auto fin = d.finite.find(key);
    if (fin != d.finite.end()) {
      bool any = false;
      for (auto x : fin->second) {
        bool ok = true;
        for (const auto& [op, v] : cs) ok = ok && holds(op, x, v);
        if (ok) {
          any = true;
          break;
        }
      }
      if (!any) return false;
      continue;
    }
    if (!interval_sat(cs, is_integer_term(slot.first, d), sort_of(slot.first, d) == Sort::Byte)) return false;
  }
  return true;
}

}  // namespace

bool is_boolean(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::Unary) return e->uop == UnOp::Not;
  if (e->kind == ExprKind::Binary) return is_comparison(e->bop) || is_connective(e->bop);
  return false;
}

std::optional<Value> constant_value(const ExprPtr& e, const Domain& d) {
  if (e->kind == ExprKind::Literal) return e->value;
  if (e->kind == ExprKind::Const) {
    auto it = d.constants.find(e->name);
    if (it != d.constants.end()) return Value::integer(it->second);
  }
  return std::nullopt;
}

ExprPtr fold(const ExprPtr& e, const Domain& d) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Const:
      if (d.resolve_constants) {
        if (auto v = constant_value(e, d)) return Expr::lit(*v);
      }
      return e;
    case ExprKind::Unary: {
      const ExprPtr a = fold(e->a, d);
      if (a->is_literal()) return Expr::lit(apply(e->uop, a->value));
      return a == e->a ? e : Expr::unary(e->uop, a);
    }
    case ExprKind::Binary: {
      const ExprPtr a = fold(e->a, d), b = fold(e->b, d);
      if (a->is_literal() && b->is_literal()) return Expr::lit(apply(e->bop, a->value, b->value));
      return a == e->a && b == e->b ? e : Expr::binary(e->bop, a, b);
    }
    default: return e;
  }
}

ExprPtr canon(const ExprPtr& g, const Domain& d) { return canon_rec(g, d); }
ExprPtr negate(const ExprPtr& g, const Domain& d) { return negate_rec(g, d); }

bool satisfiable(const std::vector<ExprPtr>& conj, const Domain& d) {
  Dnf acc{{}};
  bool overflow = false;
  for (const auto& f : conj) {
    Dnf part;
    if (!to_dnf(f, part, d.dnf_cap) || acc.size() * part.size() > d.dnf_cap) {
      overflow = true;
      continue;
    }
    Dnf next;
    for (const auto& x : acc)
      for (const auto& y : part) {
        Conj c = x;
        c.insert(c.end(), y.begin(), y.end());
        next.push_back(std::move(c));
      }
    acc = std::move(next);
    if (acc.empty()) return false;
  }
  (void)overflow;  // dropped facts only weaken the conjunction
  return std::any_of(acc.begin(), acc.end(), [&](const Conj& c) { return conj_sat(c, d); });
}

Truth decide(const std::vector<ExprPtr>& facts, const ExprPtr& g, const Domain& d) {
  const ExprPtr pos = canon(g, d);
  if (pos->is_literal()) return pos->value.truthy() ? Truth::True : Truth::False;
  std::vector<ExprPtr> with = facts;
  with.push_back(pos);
  if (!satisfiable(with, d)) return Truth::False;
  with.back() = negate(g, d);
  if (!satisfiable(with, d)) return Truth::True;
  return Truth::Unknown;
}

std::set<std::string> reads(const ExprPtr& e) {
  std::set<std::string> out;
  std::vector<const Expr*> todo{e.get()};
  while (!todo.empty()) {
    const Expr* x = todo.back();
    todo.pop_back();
    if (!x) continue;
    if (x->kind == ExprKind::Field) out.insert(x->field_key());
    if (x->kind == ExprKind::Param || x->kind == ExprKind::Var) out.insert(x->name);
    todo.push_back(x->a.get());
    todo.push_back(x->b.get());
  }
  return out;
}

}  // namespace sfv::logic
