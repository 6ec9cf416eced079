#include "sfverify/impl_text.hpp"

#include <sstream>

#include <json.hpp>

#include "lexer.hpp"

namespace sfv::ir {

namespace {

using detail::TokenStream;

Sort parse_sort_name(TokenStream& ts) {
  const auto& t = ts.expect_ident("field sort (byte, int or float)");
  if (t.text == "byte") return Sort::Byte;
  if (t.text == "int") return Sort::Int;
  if (t.text == "float") return Sort::Float;
  ts.fail_at(t.loc, "unknown sort '" + t.text + "'");
}

class ProgramParser {
 public:
  explicit ProgramParser(TokenStream& ts) : ts_(ts) {}

  ImplProgram run() {
    ts_.expect("program");
    p_.name = ts_.expect_ident("program name").text;
    ts_.expect(";");
    while (!ts_.at_end()) {
      const auto& kw = ts_.expect_ident("'record', 'const' or 'function'");
      if (kw.text == "record") parse_record(kw.loc);
      else if (kw.text == "const") parse_const();
      else if (kw.text == "function") parse_function();
      else ts_.fail_at(kw.loc, "unexpected '" + kw.text + "'");
    }
    return std::move(p_);
  }

  Diagnostics& diagnostics() { return diags_; }

 private:
  void parse_record(SourceLoc loc) {
    const auto& n = ts_.expect_ident("record name");
    Record* r = nullptr;
    if (n.text == "DWork") r = &p_.dwork;
    else if (n.text == "B") r = &p_.blocks;
    else if (n.text == "U") r = &p_.inputs;
    else if (n.text == "Y") r = &p_.outputs;
    else ts_.fail_at(n.loc, "unknown record '" + n.text + "' (expected DWork, B, U or Y)");
    (void)loc;
    ts_.expect("{");
    while (!ts_.accept("}")) {
      const auto& f = ts_.expect_ident("field name");
      ts_.expect(":");
      const Sort s = parse_sort_name(ts_);
      ts_.expect(";");
      if (r->find(f.text)) diags_.push_back({f.loc, "duplicate field " + n.text + "." + f.text});
      else r->fields.push_back({f.text, s});
    }
  }

  void parse_const() {
    const auto& n = ts_.expect_ident("constant name");
    ts_.expect("=");
    bool neg = ts_.accept("-");
    const auto& v = ts_.next();
    if (v.kind != detail::TokKind::Number || v.float_literal) ts_.fail_at(v.loc, "constant value must be an integer");
    ts_.expect(";");
    if (p_.constants.count(n.text)) diags_.push_back({n.loc, "duplicate constant " + n.text});
    const std::int64_t x = std::stoll(v.text);
    p_.constants[n.text] = neg ? -x : x;
  }

  void parse_function() {
    FunctionDef f;
    const auto& n = ts_.expect_ident("function name");
    f.name = n.text;
    f.loc = n.loc;
    ts_.expect("(");
    if (!ts_.accept(")")) {
      do {
        f.params.push_back(ts_.expect_ident("parameter name").text);
      } while (ts_.accept(","));
      ts_.expect(")");
    }
    f.body = parse_block();
    if (p_.functions.count(f.name)) diags_.push_back({f.loc, "duplicate function " + f.name});
    p_.add_function(std::move(f));
  }

  StmtPtr parse_block() {
    const SourceLoc loc = ts_.peek().loc;
    ts_.expect("{");
    std::vector<StmtPtr> body;
    while (!ts_.accept("}")) {
      if (ts_.at_end()) ts_.fail("unterminated block");
      body.push_back(parse_stmt());
    }
    return Stmt::seq(std::move(body), loc);
  }

  StmtPtr parse_stmt() {
    const SourceLoc loc = ts_.peek().loc;
    if (ts_.accept("if")) {
      std::vector<Arm> arms;
      StmtPtr else_body;
      ts_.expect("(");
      ExprPtr g = detail::parse_expr(ts_);
      ts_.expect(")");
      arms.push_back({g, parse_block()});
      while (ts_.accept("else")) {
        if (ts_.accept("if")) {
          ts_.expect("(");
          ExprPtr h = detail::parse_expr(ts_);
          ts_.expect(")");
          arms.push_back({h, parse_block()});
        } else {
          else_body = parse_block();
          break;
        }
      }
      return Stmt::if_chain(std::move(arms), else_body, loc);
    }
    const auto& id = ts_.expect_ident("statement");
    if (ts_.accept("(")) {
      std::vector<ExprPtr> args;
      if (!ts_.accept(")")) {
        do {
          args.push_back(detail::parse_expr(ts_));
        } while (ts_.accept(","));
        ts_.expect(")");
      }
      ts_.expect(";");
      return Stmt::call(id.text, std::move(args), loc);
    }
    ts_.expect(".");
    const auto& f = ts_.expect_ident("field name");
    ts_.expect("=");
    ExprPtr v = detail::parse_expr(ts_);
    ts_.expect(";");
    return Stmt::assign(Expr::fld(id.text, f.text), v, loc);
  }

  TokenStream& ts_;
  ImplProgram p_;
  Diagnostics diags_;
};

void collect_unresolved(const ExprPtr& e, SourceLoc loc, const std::string& fn, Diagnostics& out) {
  if (!e) return;
  if (e->kind == ExprKind::Var) out.push_back({loc, "unknown identifier " + e->name + " in " + fn});
  collect_unresolved(e->a, loc, fn, out);
  collect_unresolved(e->b, loc, fn, out);
}

void collect_unresolved(const StmtPtr& s, const std::string& fn, Diagnostics& out) {
  if (!s) return;
  collect_unresolved(s->value, s->loc, fn, out);
  for (const auto& a : s->args) collect_unresolved(a, s->loc, fn, out);
  for (const auto& a : s->arms) {
    collect_unresolved(a.guard, s->loc, fn, out);
    collect_unresolved(a.body, fn, out);
  }
  collect_unresolved(s->else_body, fn, out);
  for (const auto& x : s->body) collect_unresolved(x, fn, out);
}

const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Byte: return "byte";
    case Sort::Int: return "int";
    case Sort::Float: return "float";
  }
  return "int";
}

}  // namespace

ExprPtr resolve_identifiers(const ExprPtr& e, const std::set<std::string>& params,
                            const std::map<std::string, std::int64_t>& constants) {
  if (!e) return e;
  if (e->kind == ExprKind::Var) {
    if (params.count(e->name)) return Expr::param(e->name);
    if (constants.count(e->name)) return Expr::constant(e->name);
    return e;
  }
  if (e->kind == ExprKind::Unary) return Expr::unary(e->uop, resolve_identifiers(e->a, params, constants));
  if (e->kind == ExprKind::Binary)
    return Expr::binary(e->bop, resolve_identifiers(e->a, params, constants), resolve_identifiers(e->b, params, constants));
  return e;
}

StmtPtr resolve_identifiers(const StmtPtr& s, const std::set<std::string>& params,
                            const std::map<std::string, std::int64_t>& constants) {
  if (!s) return s;
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> body;
      for (const auto& x : s->body) body.push_back(resolve_identifiers(x, params, constants));
      return Stmt::seq(std::move(body), s->loc);
    }
    case StmtKind::Assign:
      return Stmt::assign(s->target, resolve_identifiers(s->value, params, constants), s->loc);
    case StmtKind::If: {
      std::vector<Arm> arms;
      for (const auto& a : s->arms)
        arms.push_back({resolve_identifiers(a.guard, params, constants), resolve_identifiers(a.body, params, constants)});
      return Stmt::if_chain(std::move(arms), resolve_identifiers(s->else_body, params, constants), s->loc);
    }
    case StmtKind::Call: {
      std::vector<ExprPtr> args;
      for (const auto& a : s->args) args.push_back(resolve_identifiers(a, params, constants));
      return Stmt::call(s->callee, std::move(args), s->loc);
    }
    case StmtKind::Broadcast: return s;
  }
  return s;
}

Parsed<ImplProgram> parse_impl(const std::string& text) {
  Parsed<ImplProgram> result;
  auto toks = detail::tokenize(text, result.diagnostics);
  if (!result.diagnostics.empty()) return result;
  TokenStream ts(std::move(toks));
  ProgramParser parser(ts);
  ImplProgram p;
  try {
    p = parser.run();
  } catch (const ParseError& e) {
    result.diagnostics = parser.diagnostics();
    for (const auto& d : e.diagnostics()) result.diagnostics.push_back(d);
    return result;
  }
  result.diagnostics = parser.diagnostics();
  for (auto& [name, f] : p.functions) {
    f.body = resolve_identifiers(f.body, std::set<std::string>(f.params.begin(), f.params.end()), p.constants);
    collect_unresolved(f.body, f.name, result.diagnostics);
  }
  for (const auto& d : check_program(p)) {
    if (d.message.rfind("unknown identifier", 0) != 0) result.diagnostics.push_back(d);
  }
  if (result.diagnostics.empty()) result.value = std::move(p);
  return result;
}

std::string print_impl(const ImplProgram& p) {
  std::ostringstream out;
  out << "program " << p.name << ";\n";
  for (const Record* r : p.records()) {
    out << "\nrecord " << r->name << " {\n";
    for (const auto& f : r->fields) out << "  " << f.name << " : " << sort_name(f.sort) << ";\n";
    out << "}\n";
  }
  if (!p.constants.empty()) out << '\n';
  for (const auto& [k, v] : p.constants) out << "const " << k << " = " << v << ";\n";
  for (const auto& fn : p.function_order) {
    const auto& f = p.functions.at(fn);
    out << "\nfunction " << f.name << '(';
    for (std::size_t i = 0; i < f.params.size(); ++i) out << (i ? ", " : "") << f.params[i];
    out << ") {\n" << print(f.body, PrintStyle::Program, 1) << "}\n";
  }
  return out.str();
}

std::string impl_to_json(const ImplProgram& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  auto& recs = j["records"] = nlohmann::ordered_json::object();
  for (const Record* r : p.records()) {
    auto& fields = recs[r->name] = nlohmann::ordered_json::array();
    for (const auto& f : r->fields) fields.push_back({{"name", f.name}, {"sort", sort_name(f.sort)}});
  }
  auto& consts = j["constants"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : p.constants) consts[k] = v;
  auto& fns = j["functions"] = nlohmann::ordered_json::array();
  for (const auto& fn : p.function_order) {
    const auto& f = p.functions.at(fn);
    fns.push_back({{"name", f.name}, {"params", f.params}, {"body", print(f.body)}});
  }
  return j.dump(2);
}

}  // namespace sfv::ir
