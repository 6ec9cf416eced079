#include "sfverify/ast.hpp"

#include <cstdio>
#include <sstream>

namespace sfv {

ExprPtr Expr::lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Literal;
  e->value = v;
  return e;
}

ExprPtr Expr::var(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::fld(std::string record, std::string field) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Field;
  e->name = std::move(record);
  e->field = std::move(field);
  return e;
}

ExprPtr Expr::param(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Param;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::constant(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::unary(UnOp op, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->uop = op;
  e->a = std::move(x);
  return e;
}

ExprPtr Expr::binary(BinOp op, ExprPtr x, ExprPtr y) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Binary;
  e->bop = op;
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

ExprPtr Expr::state_ref(std::string id) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::StateRef;
  e->name = std::move(id);
  return e;
}

ExprPtr Expr::struct_ident(std::string id) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::StructIdent;
  e->a = state_ref(std::move(id));
  return e;
}

ExprPtr Expr::status(ExprPtr state) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Status;
  e->a = std::move(state);
  return e;
}

ExprPtr Expr::history_is(std::string state, std::string child) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::HistoryIs;
  e->name = std::move(state);
  e->field = std::move(child);
  return e;
}

ExprPtr Expr::event_lit(std::string ev) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::EventLit;
  e->name = std::move(ev);
  return e;
}

namespace {

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 7;
  if (e.kind != ExprKind::Binary) return 8;
  switch (e.bop) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne: return 3;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul: return 6;
  }
  return 0;
}

void print_expr(const Expr& e, std::ostringstream& out);

void print_operand(const Expr& child, int parent_prec, bool right, std::ostringstream& out) {
  const int p = precedence(child);
  // Comparisons never chain without parentheses; right operands of
  // left-associative operators need them at equal precedence.
  const bool wrap = p < parent_prec || (p == parent_prec && (right || parent_prec == 3 || parent_prec == 4)) ||
                    (child.kind == ExprKind::Literal && parent_prec == 7 && child.value.as_double() < 0);
  if (wrap) out << '(';
  print_expr(child, out);
  if (wrap) out << ')';
}

void print_expr(const Expr& e, std::ostringstream& out) {
  switch (e.kind) {
    case ExprKind::Literal: out << e.value.str(); break;
    case ExprKind::Var:
    case ExprKind::Param:
    case ExprKind::Const:
    case ExprKind::StateRef: out << e.name; break;
    case ExprKind::Field: out << e.name << '.' << e.field; break;
    case ExprKind::Unary:
      out << symbol(e.uop);
      print_operand(*e.a, 7, true, out);
      break;
    case ExprKind::Binary: {
      const int p = precedence(e);
      print_operand(*e.a, p, false, out);
      out << ' ' << symbol(e.bop) << ' ';
      print_operand(*e.b, p, true, out);
      break;
    }
    case ExprKind::StructIdent:
      out << "states(";
      print_expr(*e.a, out);
      out << ").identifier";
      break;
    case ExprKind::Status:
      out << "ss(";
      print_expr(*e.a, out);
      out << ')';
      break;
    case ExprKind::HistoryIs: out << "history(" << e.name << ", " << e.field << ')'; break;
    case ExprKind::EventLit: out << "event(" << e.name << ')'; break;
  }
}

void pad(std::ostringstream& out, int indent) {
  for (int i = 0; i < indent; ++i) out << "  ";
}

void print_stmt(const Stmt& s, PrintStyle style, int indent, std::ostringstream& out);

void print_block(const StmtPtr& s, PrintStyle style, int indent, std::ostringstream& out) {
  out << "{\n";
  if (s) print_stmt(*s, style, indent + 1, out);
  pad(out, indent);
  out << '}';
}

void print_stmt(const Stmt& s, PrintStyle style, int indent, std::ostringstream& out) {
  switch (s.kind) {
    case StmtKind::Seq:
      for (const auto& c : s.body) print_stmt(*c, style, indent, out);
      break;
    case StmtKind::Assign:
      pad(out, indent);
      out << print(s.target) << (style == PrintStyle::Chart ? " := " : " = ") << print(s.value) << ";\n";
      break;
    case StmtKind::Call:
      pad(out, indent);
      out << s.callee << '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) out << (i ? ", " : "") << print(s.args[i]);
      out << ");\n";
      break;
    case StmtKind::Broadcast:
      pad(out, indent);
      out << "send " << s.event << ";\n";
      break;
    case StmtKind::If:
      pad(out, indent);
      for (std::size_t i = 0; i < s.arms.size(); ++i) {
        if (i) out << " else ";
        out << "if (" << print(s.arms[i].guard) << ") ";
        print_block(s.arms[i].body, style, indent, out);
      }
      if (s.else_body) {
        out << " else ";
        print_block(s.else_body, style, indent, out);
      }
      out << '\n';
      break;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream out;
  print_expr(e, out);
  return out.str();
}

bool equal(const ExprPtr& x, const ExprPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case ExprKind::Literal: return x->value == y->value;
    case ExprKind::Var:
    case ExprKind::Param:
    case ExprKind::Const:
    case ExprKind::StateRef:
    case ExprKind::EventLit: return x->name == y->name;
    case ExprKind::Field:
    case ExprKind::HistoryIs: return x->name == y->name && x->field == y->field;
    case ExprKind::Unary: return x->uop == y->uop && equal(x->a, y->a);
    case ExprKind::Binary: return x->bop == y->bop && equal(x->a, y->a) && equal(x->b, y->b);
    case ExprKind::StructIdent:
    case ExprKind::Status: return equal(x->a, y->a);
  }
  return false;
}

StmtPtr Stmt::assign(ExprPtr target, ExprPtr value, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Assign;
  s->target = std::move(target);
  s->value = std::move(value);
  s->loc = loc;
  return s;
}

StmtPtr Stmt::if_chain(std::vector<Arm> arms, StmtPtr else_body, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::If;
  s->arms = std::move(arms);
  s->else_body = std::move(else_body);
  s->loc = loc;
  return s;
}

StmtPtr Stmt::seq(std::vector<StmtPtr> body, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Seq;
  s->body = std::move(body);
  s->loc = loc;
  return s;
}

StmtPtr Stmt::call(std::string callee, std::vector<ExprPtr> args, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Call;
  s->callee = std::move(callee);
  s->args = std::move(args);
  s->loc = loc;
  return s;
}

StmtPtr Stmt::broadcast(std::string event, std::string context, SourceLoc loc) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Broadcast;
  s->event = std::move(event);
  s->context = std::move(context);
  s->loc = loc;
  return s;
}

namespace {

void flatten_into(const StmtPtr& s, std::vector<StmtPtr>& out) {
  if (!s) return;
  if (s->kind == StmtKind::Seq) {
    for (const auto& c : s->body) flatten_into(c, out);
    return;
  }
  if (s->kind == StmtKind::If) {
    std::vector<Arm> arms;
    arms.reserve(s->arms.size());
    for (const auto& a : s->arms) arms.push_back({a.guard, flatten(a.body)});
    out.push_back(Stmt::if_chain(std::move(arms), s->else_body ? flatten(s->else_body) : nullptr, s->loc));
    return;
  }
  out.push_back(s);
}

}  // namespace

StmtPtr flatten(const StmtPtr& s) {
  std::vector<StmtPtr> out;
  flatten_into(s, out);
  if (out.size() == 1 && out.front()->kind != StmtKind::Seq) return out.front();
  return Stmt::seq(std::move(out), s ? s->loc : SourceLoc{});
}

StmtPtr sequence(std::vector<StmtPtr> parts) { return flatten(Stmt::seq(std::move(parts))); }

std::string print(const Stmt& s, PrintStyle style, int indent) {
  std::ostringstream out;
  print_stmt(s, style, indent, out);
  return out.str();
}

bool equal(const StmtPtr& x, const StmtPtr& y) {
  if (x == y) return true;
  if (!x || !y) return (!x || x->is_skip()) && (!y || y->is_skip());
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case StmtKind::Assign: return equal(x->target, y->target) && equal(x->value, y->value);
    case StmtKind::Call:
      if (x->callee != y->callee || x->args.size() != y->args.size()) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i)
        if (!equal(x->args[i], y->args[i])) return false;
      return true;
    case StmtKind::Broadcast: return x->event == y->event && x->context == y->context;
    case StmtKind::Seq:
      if (x->body.size() != y->body.size()) return false;
      for (std::size_t i = 0; i < x->body.size(); ++i)
        if (!equal(x->body[i], y->body[i])) return false;
      return true;
    case StmtKind::If:
      if (x->arms.size() != y->arms.size()) return false;
      for (std::size_t i = 0; i < x->arms.size(); ++i)
        if (!equal(x->arms[i].guard, y->arms[i].guard) || !equal(x->arms[i].body, y->arms[i].body)) return false;
      if (!x->else_body != !y->else_body) return false;
      return !x->else_body || equal(x->else_body, y->else_body);
  }
  return false;
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest(const StmtPtr& s) { return digest(print(s)); }

std::size_t size(const StmtPtr& s) {
  if (!s) return 0;
  std::size_t n = 1;
  for (const auto& c : s->body) n += size(c);
  for (const auto& a : s->arms) n += 1 + size(a.body);
  if (s->else_body) n += size(s->else_body);
  return n;
}

}  // namespace sfv
