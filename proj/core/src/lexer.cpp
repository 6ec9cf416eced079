#include "lexer.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace sfv::detail {

namespace {

const char* const kTwoCharPuncts[] = {":=", "==", "!=", "<=", ">=", "&&", "||", "->", "++", "--", "+=", "-=", "*=", "/="};

}  // namespace

std::vector<Token> tokenize(const std::string& src, Diagnostics& diags, LexOptions opts) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const SourceLoc start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
      if (i + 1 >= src.size()) {
        diags.push_back({start, "unterminated comment"});
        break;
      }
      advance(2);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = TokKind::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        t.float_literal = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          t.float_literal = true;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.text = src.substr(i, j - i);
      if (opts.c_suffixes) {
        while (j < src.size() && std::strchr("uUlLfF", src[j]) != nullptr) {
          if (src[j] == 'f' || src[j] == 'F') t.float_literal = true;
          ++j;
        }
      }
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        diags.push_back({t.loc, "malformed number '" + src.substr(i, j - i + 1) + "'"});
      }
      t.kind = TokKind::Number;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool two = false;
    if (i + 1 < src.size()) {
      const std::string pair = src.substr(i, 2);
      for (const char* p : kTwoCharPuncts) {
        if (pair == p) {
          two = true;
          break;
        }
      }
    }
    if (two) {
      t.kind = TokKind::Punct;
      t.text = src.substr(i, 2);
      advance(2);
      out.push_back(std::move(t));
      continue;
    }
    if (std::strchr("{}()[];,.:=<>+-*/!&|#?%~^", c) != nullptr) {
      t.kind = TokKind::Punct;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    diags.push_back({t.loc, std::string("unexpected character '") + c + "'"});
    advance(1);
  }
  Token end;
  end.kind = TokKind::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

TokenStream::TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {
  if (toks_.empty() || toks_.back().kind != TokKind::End) toks_.push_back(Token{});
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t idx = pos_ + ahead;
  return idx < toks_.size() ? toks_[idx] : toks_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is(const std::string& text, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind != TokKind::End && t.kind != TokKind::Number && t.text == text;
}

bool TokenStream::accept(const std::string& text) {
  if (!is(text)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(const std::string& text) {
  if (!is(text)) {
    const Token& t = peek();
    fail("expected '" + text + "' but found " + (t.kind == TokKind::End ? std::string("end of input") : "'" + t.text + "'"));
  }
  return next();
}

const Token& TokenStream::expect_ident(const std::string& what) {
  if (!is_ident()) {
    const Token& t = peek();
    fail("expected " + what + " but found " + (t.kind == TokKind::End ? std::string("end of input") : "'" + t.text + "'"));
  }
  return next();
}

void TokenStream::fail(const std::string& message) const { fail_at(peek().loc, message); }

void TokenStream::fail_at(SourceLoc loc, const std::string& message) const {
  throw ParseError({Diagnostic{loc, message}});
}

namespace {

struct BinInfo {
  BinOp op;
  int prec;
};

bool binary_info(const TokenStream& ts, BinInfo& info) {
  const Token& t = ts.peek();
  if (t.kind != TokKind::Punct) return false;
  static const std::pair<const char*, BinInfo> table[] = {
      {"||", {BinOp::Or, 1}}, {"&&", {BinOp::And, 2}}, {"==", {BinOp::Eq, 3}}, {"!=", {BinOp::Ne, 3}},
      {"<", {BinOp::Lt, 4}},  {"<=", {BinOp::Le, 4}},  {">", {BinOp::Gt, 4}},  {">=", {BinOp::Ge, 4}},
      {"+", {BinOp::Add, 5}}, {"-", {BinOp::Sub, 5}},  {"*", {BinOp::Mul, 6}},
  };
  for (const auto& [text, bi] : table) {
    if (t.text == text) {
      info = bi;
      return true;
    }
  }
  return false;
}

ExprPtr parse_unary(TokenStream& ts, const ExprSyntax& syn);

ExprPtr parse_binary(TokenStream& ts, const ExprSyntax& syn, int min_prec) {
  ExprPtr lhs = parse_unary(ts, syn);
  BinInfo info{};
  while (binary_info(ts, info) && info.prec >= min_prec) {
    ts.next();
    ExprPtr rhs = parse_binary(ts, syn, info.prec + 1);
    lhs = Expr::binary(info.op, lhs, rhs);
  }
  return lhs;
}

ExprPtr parse_primary(TokenStream& ts, const ExprSyntax& syn) {
  const Token& t = ts.peek();
  if (t.kind == TokKind::Number) {
    ts.next();
    if (t.float_literal) return Expr::lit(Value::real(std::strtod(t.text.c_str(), nullptr)));
    errno = 0;
    const long long v = std::strtoll(t.text.c_str(), nullptr, 10);
    if (errno == ERANGE) ts.fail_at(t.loc, "integer literal out of range '" + t.text + "'");
    return Expr::lit(Value::integer(v));
  }
  if (t.kind == TokKind::Ident) {
    ts.next();
    std::string name = t.text;
    if (ts.is(".") && ts.is_ident(1)) {
      ts.next();
      const Token& f = ts.next();
      return Expr::fld(name, f.text);
    }
    if (syn.c_mode && ts.is("->")) {
      if (syn.unsupported) syn.unsupported(ts.peek().loc, "pointer member access '->'");
      ts.fail("pointer member access '->' is outside the supported subset");
    }
    return Expr::var(name);
  }
  if (ts.is("(")) {
    // C cast: "(" type-name ")" operand
    if (syn.c_mode && ts.is_ident(1) && syn.type_names.count(ts.peek(1).text) && ts.is(")", 2)) {
      ts.next();
      ts.next();
      ts.next();
      return parse_unary(ts, syn);
    }
    if (syn.c_mode && ts.is_ident(1) && syn.type_names.count(ts.peek(1).text) && ts.is("*", 2)) {
      if (syn.unsupported) syn.unsupported(ts.peek(2).loc, "pointer cast");
      ts.fail_at(ts.peek(2).loc, "pointer cast is outside the supported subset");
    }
    ts.next();
    ExprPtr e = parse_binary(ts, syn, 1);
    ts.expect(")");
    return e;
  }
  if (t.kind == TokKind::End) ts.fail("expected expression but found end of input");
  ts.fail("expected expression but found '" + t.text + "'");
}

ExprPtr parse_unary(TokenStream& ts, const ExprSyntax& syn) {
  if (ts.accept("-")) {
    ExprPtr x = parse_unary(ts, syn);
    if (x->kind == ExprKind::Literal) return Expr::lit(apply(UnOp::Neg, x->value));
    return Expr::unary(UnOp::Neg, x);
  }
  if (ts.accept("+")) return parse_unary(ts, syn);
  if (ts.accept("!")) return Expr::unary(UnOp::Not, parse_unary(ts, syn));
  if (syn.c_mode && (ts.is("*") || ts.is("&"))) {
    const Token& t = ts.peek();
    const std::string what = t.text == "*" ? "pointer dereference '*'" : "address-of '&'";
    if (syn.unsupported) syn.unsupported(t.loc, what);
    ts.fail_at(t.loc, what + " is outside the supported subset");
  }
  return parse_primary(ts, syn);
}

}  // namespace

ExprPtr parse_expr(TokenStream& ts, const ExprSyntax& syntax) { return parse_binary(ts, syntax, 1); }

}  // namespace sfv::detail
