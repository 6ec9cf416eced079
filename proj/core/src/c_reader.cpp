#include "sfverify/c_reader.hpp"

#include <set>
#include <sstream>

#include "lexer.hpp"
#include "sfverify/impl_text.hpp"

namespace sfv::ir {

namespace {

using detail::TokenStream;
using detail::TokKind;

const char* const kPatternMessage = "does not conform to the architectural pattern: ";

struct NonConformant {
  SourceLoc loc;
  std::string construct;
};

const std::map<std::string, Sort>& builtin_types() {
  static const std::map<std::string, Sort> types = {
      {"uint8_T", Sort::Byte},  {"boolean_T", Sort::Byte}, {"uint8_t", Sort::Byte},   {"bool", Sort::Byte},
      {"int8_T", Sort::Int},    {"int16_T", Sort::Int},    {"int32_T", Sort::Int},    {"int64_T", Sort::Int},
      {"uint16_T", Sort::Int},  {"uint32_T", Sort::Int},   {"int_T", Sort::Int},      {"int", Sort::Int},
      {"long", Sort::Int},      {"short", Sort::Int},      {"int32_t", Sort::Int},    {"int64_t", Sort::Int},
      {"real_T", Sort::Float},  {"real64_T", Sort::Float}, {"real32_T", Sort::Float}, {"double", Sort::Float},
      {"float", Sort::Float},
  };
  return types;
}

struct RawStruct {
  std::vector<FieldDecl> fields;
};

struct RawFunction {
  FunctionDef def;
};

class CParser {
 public:
  CParser(TokenStream& ts, std::map<std::string, std::int64_t> defines)
      : ts_(ts), defines_(std::move(defines)), types_(builtin_types()) {
    syntax_.c_mode = true;
    for (const auto& [k, v] : types_) syntax_.type_names.insert(k);
    syntax_.unsupported = [](SourceLoc loc, const std::string& what) { throw NonConformant{loc, what}; };
  }

  ImplProgram run(std::vector<std::string>& log) {
    while (!ts_.at_end()) top_level();
    return finish(log);
  }

 private:
  [[noreturn]] void reject(SourceLoc loc, const std::string& what) { throw NonConformant{loc, what}; }

  bool is_type_start(std::size_t ahead = 0) const {
    const auto& t = ts_.peek(ahead);
    if (t.kind != TokKind::Ident) return false;
    return types_.count(t.text) || structs_.count(t.text) || t.text == "void" || t.text == "unsigned" ||
           t.text == "signed" || t.text == "struct" || t.text == "const" || t.text == "static" || t.text == "extern";
  }

  // Returns the scalar sort, or the struct typedef name through `struct_name`.
  std::optional<Sort> parse_type(std::string* struct_name, bool* is_void) {
    while (ts_.accept("static") || ts_.accept("extern") || ts_.accept("const")) {
    }
    if (is_void) *is_void = false;
    const auto& t = ts_.peek();
    if (t.kind != TokKind::Ident) reject(t.loc, "unexpected '" + t.text + "' where a type was expected");
    if (ts_.accept("void")) {
      if (is_void) *is_void = true;
      return std::nullopt;
    }
    if (ts_.accept("unsigned") || ts_.accept("signed")) {
      if (ts_.accept("char")) return Sort::Byte;
      ts_.accept("int");
      ts_.accept("long");
      return Sort::Int;
    }
    if (ts_.accept("struct")) {
      const auto& tag = ts_.expect_ident("struct tag");
      if (!structs_.count(tag.text)) reject(tag.loc, "unknown struct '" + tag.text + "'");
      if (struct_name) *struct_name = tag.text;
      return std::nullopt;
    }
    if (auto it = types_.find(t.text); it != types_.end()) {
      ts_.next();
      return it->second;
    }
    if (structs_.count(t.text)) {
      ts_.next();
      if (struct_name) *struct_name = t.text;
      return std::nullopt;
    }
    reject(t.loc, "unknown type '" + t.text + "'");
  }

  void top_level() {
    const SourceLoc loc = ts_.peek().loc;
    if (ts_.accept(";")) return;
    if (ts_.accept("typedef")) {
      if (ts_.accept("struct")) {
        std::string tag;
        if (ts_.is_ident()) tag = ts_.next().text;
        ts_.expect("{");
        RawStruct rs;
        while (!ts_.accept("}")) {
          const SourceLoc floc = ts_.peek().loc;
          std::string nested;
          auto sort = parse_type(&nested, nullptr);
          if (!sort) reject(floc, "non-scalar struct member");
          if (ts_.is("*")) reject(ts_.peek().loc, "pointer member");
          const auto& f = ts_.expect_ident("member name");
          if (ts_.is("[")) reject(ts_.peek().loc, "array member");
          ts_.expect(";");
          rs.fields.push_back({f.text, *sort});
        }
        const auto& name = ts_.expect_ident("typedef name");
        ts_.expect(";");
        structs_[name.text] = rs;
        if (!tag.empty()) structs_[tag] = rs;
        return;
      }
      std::string nested;
      auto sort = parse_type(&nested, nullptr);
      if (ts_.is("*")) reject(ts_.peek().loc, "pointer typedef");
      const auto& name = ts_.expect_ident("typedef name");
      ts_.expect(";");
      if (sort) {
        types_[name.text] = *sort;
        syntax_.type_names.insert(name.text);
      } else if (!nested.empty()) {
        structs_[name.text] = structs_[nested];
      }
      return;
    }
    if (!is_type_start()) reject(loc, "unexpected '" + ts_.peek().text + "' at top level");
    std::string struct_name;
    bool is_void = false;
    auto sort = parse_type(&struct_name, &is_void);
    if (ts_.is("*")) reject(ts_.peek().loc, "pointer declaration");
    const auto& name = ts_.expect_ident("declaration name");
    if (ts_.accept("(")) {
      function(name.text, name.loc);
      return;
    }
    if (ts_.is("=")) reject(ts_.peek().loc, "initialized global");
    if (ts_.is("[")) reject(ts_.peek().loc, "array declaration");
    ts_.expect(";");
    if (struct_name.empty()) reject(loc, "global scalar variable '" + name.text + "'");
    (void)sort;
    bind_record(name.text, struct_name, name.loc);
  }

  void bind_record(const std::string& var, const std::string& struct_name, SourceLoc loc) {
    static const std::pair<const char*, const char*> suffixes[] = {{"DWork", "DWork"}, {"B", "B"}, {"U", "U"}, {"Y", "Y"}};
    for (const auto& [suffix, rec] : suffixes) {
      const std::string sfx = suffix;
      std::string prefix;
      if (var == sfx) {
        prefix.clear();
      } else if (var.size() > sfx.size() + 1 && var.compare(var.size() - sfx.size() - 1, std::string::npos, "_" + sfx) == 0) {
        prefix = var.substr(0, var.size() - sfx.size() - 1);
      } else {
        continue;
      }
      if (!prefix.empty()) {
        if (chart_.empty()) chart_ = prefix;
        else if (chart_ != prefix) reject(loc, "record '" + var + "' belongs to another chart");
      }
      record_vars_[var] = rec;
      record_structs_[rec] = struct_name;
      return;
    }
    reject(loc, "global '" + var + "' is not one of the DWork, B, U, Y records");
  }

  void function(const std::string& name, SourceLoc loc) {
    FunctionDef f;
    f.name = name;
    f.loc = loc;
    if (!ts_.accept(")")) {
      if (ts_.is("void") && ts_.is(")", 1)) {
        ts_.next();
        ts_.next();
      } else {
        do {
          const SourceLoc ploc = ts_.peek().loc;
          std::string sn;
          auto sort = parse_type(&sn, nullptr);
          if (!sort || *sort == Sort::Float) reject(ploc, "parameter that is not an integer");
          if (ts_.is("*")) reject(ts_.peek().loc, "pointer parameter");
          f.params.push_back(ts_.expect_ident("parameter name").text);
        } while (ts_.accept(","));
        ts_.expect(")");
      }
    }
    if (ts_.accept(";")) return;  // prototype
    params_ = std::set<std::string>(f.params.begin(), f.params.end());
    f.body = block();
    functions_.push_back(std::move(f));
  }

  StmtPtr block() {
    const SourceLoc loc = ts_.peek().loc;
    ts_.expect("{");
    std::vector<StmtPtr> body;
    while (!ts_.accept("}")) {
      if (ts_.at_end()) ts_.fail("unterminated block");
      body.push_back(statement());
    }
    return Stmt::seq(std::move(body), loc);
  }

  StmtPtr statement() {
    const auto& t = ts_.peek();
    const SourceLoc loc = t.loc;
    if (ts_.is("{")) return block();
    if (ts_.accept(";")) return Stmt::skip();
    static const std::map<std::string, std::string> banned = {
        {"while", "while loop"},       {"for", "for loop"},      {"do", "do-while loop"},
        {"switch", "switch statement"}, {"goto", "goto"},        {"return", "return statement"},
        {"break", "break statement"},   {"continue", "continue statement"}, {"case", "case label"},
        {"default", "default label"},
    };
    if (t.kind == TokKind::Ident) {
      if (auto it = banned.find(t.text); it != banned.end()) reject(loc, it->second);
    }
    if (ts_.is("*") || ts_.is("&")) reject(loc, "pointer dereference");
    if (ts_.is("++") || ts_.is("--")) reject(loc, "increment/decrement");
    if (ts_.accept("if")) {
      std::vector<Arm> arms;
      StmtPtr else_body;
      arms.push_back({condition(), statement()});
      while (ts_.accept("else")) {
        if (ts_.accept("if")) {
          arms.push_back({condition(), statement()});
        } else {
          else_body = statement();
          break;
        }
      }
      return Stmt::if_chain(std::move(arms), else_body, loc);
    }
    if (is_type_start()) reject(loc, "local variable declaration");
    const auto& id = ts_.expect_ident("statement");
    if (ts_.accept("(")) {
      std::vector<ExprPtr> args;
      if (!ts_.accept(")")) {
        do {
          args.push_back(expression());
        } while (ts_.accept(","));
        ts_.expect(")");
      }
      ts_.expect(";");
      return Stmt::call(id.text, std::move(args), loc);
    }
    if (ts_.is("->")) reject(ts_.peek().loc, "pointer member access '->'");
    if (!ts_.is(".")) {
      if (ts_.is("=") || ts_.is("+=") || ts_.is("-=")) reject(loc, "assignment to non-record variable '" + id.text + "'");
      ts_.fail("expected '.' or '(' after '" + id.text + "'");
    }
    ts_.next();
    const auto& f = ts_.expect_ident("field name");
    if (ts_.is("+=") || ts_.is("-=") || ts_.is("*=") || ts_.is("/=")) reject(ts_.peek().loc, "compound assignment");
    if (ts_.is("++") || ts_.is("--")) reject(ts_.peek().loc, "increment/decrement");
    ts_.expect("=");
    ExprPtr v = expression();
    ts_.expect(";");
    return Stmt::assign(Expr::fld(id.text, f.text), v, loc);
  }

  ExprPtr condition() {
    ts_.expect("(");
    const SourceLoc loc = ts_.peek().loc;
    ExprPtr g = expression();
    ts_.expect(")");
    guard_locs_.push_back({g.get(), loc});
    return g;
  }

  ExprPtr expression() {
    const SourceLoc loc = ts_.peek().loc;
    ExprPtr e = detail::parse_expr(ts_, syntax_);
    if (ts_.is("(")) reject(loc, "function call inside an expression");
    if (ts_.is("?")) reject(ts_.peek().loc, "conditional expression");
    return e;
  }

  // ---- resolution ---------------------------------------------------

  std::string strip_field(const std::string& f) const {
    const std::string sfx = "_" + chart_;
    if (!chart_.empty() && f.size() > sfx.size() && f.compare(f.size() - sfx.size(), std::string::npos, sfx) == 0)
      return f.substr(0, f.size() - sfx.size());
    return f;
  }

  std::string strip_const(const std::string& c) const {
    const std::string pfx = chart_ + "_";
    if (!chart_.empty() && c.size() > pfx.size() && c.compare(0, pfx.size(), pfx) == 0) return c.substr(pfx.size());
    return c;
  }

  ExprPtr resolve(const ExprPtr& e, const std::set<std::string>& params, SourceLoc loc) {
    if (!e) return e;
    switch (e->kind) {
      case ExprKind::Field: {
        auto it = record_vars_.find(e->name);
        if (it == record_vars_.end()) reject(loc, "access to '" + e->name + "' which is not a chart record");
        return Expr::fld(it->second, strip_field(e->field));
      }
      case ExprKind::Var:
        if (params.count(e->name)) return Expr::param(e->name);
        if (defines_.count(e->name)) return Expr::constant(strip_const(e->name));
        reject(loc, "reference to unknown identifier '" + e->name + "'");
      case ExprKind::Unary: return Expr::unary(e->uop, resolve(e->a, params, loc));
      case ExprKind::Binary: return Expr::binary(e->bop, resolve(e->a, params, loc), resolve(e->b, params, loc));
      default: return e;
    }
  }

  static bool boolean_valued(const ExprPtr& e) {
    if (e->kind == ExprKind::Unary) return e->uop == UnOp::Not;
    return e->kind == ExprKind::Binary && (is_comparison(e->bop) || e->bop == BinOp::And || e->bop == BinOp::Or);
  }

  ExprPtr normalize_guard(const ExprPtr& g, SourceLoc loc, std::vector<std::string>& log) {
    if (g->kind == ExprKind::Binary && g->bop == BinOp::Ne && boolean_valued(g->a) && g->b->is_literal() &&
        g->b->value.as_double() == 0.0) {
      ExprPtr inner = normalize_guard(g->a, loc, log);
      log.push_back(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + print(g) + " -> " + print(inner));
      return inner;
    }
    if (g->kind == ExprKind::Binary && (g->bop == BinOp::And || g->bop == BinOp::Or))
      return Expr::binary(g->bop, normalize_guard(g->a, loc, log), normalize_guard(g->b, loc, log));
    return g;
  }

  StmtPtr resolve(const StmtPtr& s, const std::set<std::string>& params, std::vector<std::string>& log) {
    if (!s) return s;
    switch (s->kind) {
      case StmtKind::Seq: {
        std::vector<StmtPtr> body;
        for (const auto& x : s->body) body.push_back(resolve(x, params, log));
        return Stmt::seq(std::move(body), s->loc);
      }
      case StmtKind::Assign: {
        auto target = resolve(s->target, params, s->loc);
        return Stmt::assign(target, resolve(s->value, params, s->loc), s->loc);
      }
      case StmtKind::If: {
        std::vector<Arm> arms;
        for (const auto& a : s->arms) {
          SourceLoc gloc = s->loc;
          for (const auto& [ptr, l] : guard_locs_)
            if (ptr == a.guard.get()) gloc = l;
          arms.push_back({normalize_guard(resolve(a.guard, params, gloc), gloc, log), resolve(a.body, params, log)});
        }
        return Stmt::if_chain(std::move(arms), resolve(s->else_body, params, log), s->loc);
      }
      case StmtKind::Call: {
        std::vector<ExprPtr> args;
        for (const auto& a : s->args) args.push_back(resolve(a, params, s->loc));
        return Stmt::call(s->callee, std::move(args), s->loc);
      }
      default: return s;
    }
  }

  ImplProgram finish(std::vector<std::string>& log) {
    ImplProgram p;
    p.name = chart_.empty() ? std::string("chart") : chart_;
    auto fill = [&](Record& r) {
      auto it = record_structs_.find(r.name);
      if (it == record_structs_.end()) return;
      for (const auto& f : structs_.at(it->second).fields) r.fields.push_back({strip_field(f.name), f.sort});
    };
    fill(p.dwork);
    fill(p.blocks);
    fill(p.inputs);
    fill(p.outputs);
    for (const auto& [k, v] : defines_) p.constants[strip_const(k)] = v;
    for (auto& rf : functions_) {
      FunctionDef f = rf;
      f.body = resolve(f.body, std::set<std::string>(f.params.begin(), f.params.end()), log);
      p.add_function(std::move(f));
    }
    return p;
  }

  TokenStream& ts_;
  std::map<std::string, std::int64_t> defines_;
  std::map<std::string, Sort> types_;
  std::map<std::string, RawStruct> structs_;
  std::map<std::string, std::string> record_vars_;     // C variable -> record
  std::map<std::string, std::string> record_structs_;  // record -> typedef
  std::vector<FunctionDef> functions_;
  std::vector<std::pair<const Expr*, SourceLoc>> guard_locs_;
  std::set<std::string> params_;
  std::string chart_;
  detail::ExprSyntax syntax_;
};

std::optional<std::int64_t> const_eval(const ExprPtr& e) {
  if (!e) return std::nullopt;
  if (e->is_literal()) {
    if (e->value.is_float()) return std::nullopt;
    return e->value.as_int();
  }
  if (e->kind == ExprKind::Unary) {
    auto a = const_eval(e->a);
    if (!a) return std::nullopt;
    return apply(e->uop, Value::integer(*a)).as_int();
  }
  if (e->kind == ExprKind::Binary) {
    auto a = const_eval(e->a);
    auto b = const_eval(e->b);
    if (!a || !b) return std::nullopt;
    return apply(e->bop, Value::integer(*a), Value::integer(*b)).as_int();
  }
  return std::nullopt;
}

// Strips preprocessor lines, keeping line numbers, and collects integer
// `#define`s. Returns false with a diagnostic on an unsupported directive.
std::string preprocess(const std::string& text, std::map<std::string, std::int64_t>& defines, Diagnostics& diags) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] != '#') {
      out << line << '\n';
      continue;
    }
    std::istringstream words(line.substr(first + 1));
    std::string directive;
    words >> directive;
    if (directive == "define") {
      std::string name;
      words >> name;
      if (name.find('(') != std::string::npos) {
        diags.push_back({{lineno, static_cast<int>(first) + 1}, std::string(kPatternMessage) + "function-like macro"});
      } else {
        std::string rest;
        std::getline(words, rest);
        Diagnostics local;
        auto toks = detail::tokenize(rest, local, {true});
        std::optional<std::int64_t> v;
        if (local.empty()) {
          try {
            TokenStream ts(std::move(toks));
            detail::ExprSyntax syn;
            syn.c_mode = true;
            for (const auto& [k, s] : builtin_types()) syn.type_names.insert(k);
            ExprPtr e = detail::parse_expr(ts, syn);
            if (ts.at_end()) v = const_eval(e);
          } catch (const ParseError&) {
          }
        }
        if (v) defines[name] = *v;
        else if (!rest.empty() && rest.find_first_not_of(" \t") != std::string::npos)
          diags.push_back({{lineno, static_cast<int>(first) + 1},
                           std::string(kPatternMessage) + "non-integer macro '" + name + "'"});
      }
    } else if (directive != "include" && directive != "ifndef" && directive != "ifdef" && directive != "endif" &&
               directive != "pragma" && directive != "undef" && directive != "if" && directive != "else") {
      diags.push_back({{lineno, static_cast<int>(first) + 1}, std::string(kPatternMessage) + "directive #" + directive});
    }
    out << '\n';
  }
  return out.str();
}

const char* c_type(Sort s) {
  switch (s) {
    case Sort::Byte: return "uint8_T";
    case Sort::Int: return "int32_T";
    case Sort::Float: return "real_T";
  }
  return "int32_T";
}

ExprPtr rename_c(const ExprPtr& e, const ImplProgram& p) {
  if (!e) return e;
  switch (e->kind) {
    case ExprKind::Field: {
      const std::string field = e->name == p.dwork.name ? e->field + "_" + p.name : e->field;
      return Expr::fld(p.name + "_" + e->name, field);
    }
    case ExprKind::Const: return Expr::var(p.name + "_" + e->name);
    case ExprKind::Unary: return Expr::unary(e->uop, rename_c(e->a, p));
    case ExprKind::Binary: return Expr::binary(e->bop, rename_c(e->a, p), rename_c(e->b, p));
    default: return e;
  }
}

StmtPtr rename_c(const StmtPtr& s, const ImplProgram& p) {
  if (!s) return s;
  switch (s->kind) {
    case StmtKind::Seq: {
      std::vector<StmtPtr> body;
      for (const auto& x : s->body) body.push_back(rename_c(x, p));
      return Stmt::seq(std::move(body));
    }
    case StmtKind::Assign: return Stmt::assign(rename_c(s->target, p), rename_c(s->value, p));
    case StmtKind::If: {
      std::vector<Arm> arms;
      for (const auto& a : s->arms) arms.push_back({rename_c(a.guard, p), rename_c(a.body, p)});
      return Stmt::if_chain(std::move(arms), rename_c(s->else_body, p));
    }
    case StmtKind::Call: {
      std::vector<ExprPtr> args;
      for (const auto& a : s->args) args.push_back(rename_c(a, p));
      return Stmt::call(s->callee, std::move(args));
    }
    default: return s;
  }
}

}  // namespace

CReadResult read_c_subset(const std::string& text) {
  CReadResult result;
  std::map<std::string, std::int64_t> defines;
  Diagnostics& diags = result.program.diagnostics;
  const std::string body = preprocess(text, defines, diags);
  if (!diags.empty()) {
    result.nonconformant = true;
    return result;
  }
  auto toks = detail::tokenize(body, diags, {true});
  if (!diags.empty()) {
    for (auto& d : diags) d.message = kPatternMessage + d.message;
    result.nonconformant = true;
    return result;
  }
  TokenStream ts(std::move(toks));
  CParser parser(ts, std::move(defines));
  ImplProgram p;
  try {
    p = parser.run(result.normalization_log);
  } catch (const NonConformant& nc) {
    diags.push_back({nc.loc, kPatternMessage + nc.construct});
    result.nonconformant = true;
    return result;
  } catch (const ParseError& e) {
    for (const auto& d : e.diagnostics()) diags.push_back({d.loc, kPatternMessage + d.message});
    result.nonconformant = true;
    return result;
  }
  for (const auto& d : check_program(p)) diags.push_back({d.loc, kPatternMessage + d.message});
  if (!diags.empty()) {
    result.nonconformant = true;
    return result;
  }
  result.program.value = std::move(p);
  return result;
}

std::string render_c(const ImplProgram& p) {
  std::ostringstream out;
  out << "/* " << p.name << ": generated-style rendering */\n\n";
  out << "typedef unsigned char uint8_T;\ntypedef int int32_T;\ntypedef double real_T;\n\n";
  for (const auto& [k, v] : p.constants) out << "#define " << p.name << '_' << k << ' ' << v << '\n';
  struct Kind {
    const Record* rec;
    const char* type_prefix;
  };
  const Kind kinds[] = {{&p.dwork, "D_Work_"}, {&p.blocks, "BlockIO_"}, {&p.inputs, "ExternalInputs_"}, {&p.outputs, "ExternalOutputs_"}};
  for (const auto& k : kinds) {
    if (k.rec->fields.empty()) continue;
    out << "\ntypedef struct {\n";
    for (const auto& f : k.rec->fields) {
      const std::string name = k.rec == &p.dwork ? f.name + "_" + p.name : f.name;
      out << "  " << c_type(f.sort) << ' ' << name << ";\n";
    }
    out << "} " << k.type_prefix << p.name << ";\n";
  }
  out << '\n';
  for (const auto& k : kinds)
    if (!k.rec->fields.empty()) out << k.type_prefix << p.name << ' ' << p.name << '_' << k.rec->name << ";\n";
  for (const auto& fn : p.function_order) {
    const auto& f = p.functions.at(fn);
    out << "\nvoid " << f.name << '(';
    if (f.params.empty()) out << "void";
    for (std::size_t i = 0; i < f.params.size(); ++i) out << (i ? ", " : "") << "int " << f.params[i];
    out << ")\n{\n" << print(rename_c(f.body, p), PrintStyle::Program, 1) << "}\n";
  }
  return out.str();
}

}  // namespace sfv::ir
