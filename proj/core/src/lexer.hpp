#pragma once

// Tokenizer and expression parser shared by the chart DSL, the IR text
// format and the restricted C reader.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"
#include "sfverify/diagnostics.hpp"

namespace sfv::detail {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourceLoc loc;
  bool float_literal = false;
};

struct LexOptions {
  bool c_suffixes = false;  // accept 1U, 2.0f, 3L
};

/// Splits `src` into tokens. Comments (`//`, `/* */`) are skipped; lexical
/// errors are appended to `diags` and the offending character dropped.
std::vector<Token> tokenize(const std::string& src, Diagnostics& diags, LexOptions opts = {});

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokKind::End; }
  bool is(const std::string& text, std::size_t ahead = 0) const;
  bool is_ident(std::size_t ahead = 0) const { return peek(ahead).kind == TokKind::Ident; }
  /// Consumes the token if it matches.
  bool accept(const std::string& text);
  /// Consumes a matching token or throws ParseError.
  const Token& expect(const std::string& text);
  const Token& expect_ident(const std::string& what);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(SourceLoc loc, const std::string& message) const;
  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct ExprSyntax {
  bool c_mode = false;               // casts, pointer diagnostics
  std::set<std::string> type_names;  // recognised in casts
  /// Called with a construct name when `c_mode` meets something outside the
  /// accepted subset (pointer dereference, address-of, member arrow).
  std::function<void(SourceLoc, const std::string&)> unsupported;
};

/// Precedence-climbing parser over C operator syntax. Bare identifiers
/// become Var nodes and `a.b` becomes a Field node; callers resolve them.
ExprPtr parse_expr(TokenStream& ts, const ExprSyntax& syntax = {});

}  // namespace sfv::detail
