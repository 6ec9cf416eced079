#pragma once

#include <cstdint>
#include <string>

namespace sfv {

/// Numeric sorts shared by charts and implementation programs.
enum class Sort { Int, Float, Byte };

std::string to_string(Sort s);

/// A scalar value: signed 64-bit integer or IEEE binary64.
///
/// Integer arithmetic saturates at the int64 bounds; mixed operands promote
/// to floating point. Booleans are integers 0/1 and any nonzero value is
/// true when used as a guard.
class Value {
 public:
  Value() = default;
  static Value integer(std::int64_t v) { return Value(v); }
  static Value real(double v);
  static Value boolean(bool b) { return Value(std::int64_t{b ? 1 : 0}); }

  bool is_float() const { return is_float_; }
  std::int64_t as_int() const;
  double as_double() const { return is_float_ ? f_ : static_cast<double>(i_); }
  bool truthy() const { return is_float_ ? f_ != 0.0 : i_ != 0; }

  /// Converts to the representation of `s`: truncation toward zero for
  /// integer sorts (saturating), clamp to [0, 255] for bytes.
  Value coerce(Sort s) const;

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }

  /// Canonical text: integers in decimal, floats with a trailing ".0" when
  /// integral so that the sort survives a print/parse round trip.
  std::string str() const;

 private:
  explicit Value(std::int64_t v) : i_(v) {}

  bool is_float_ = false;
  std::int64_t i_ = 0;
  double f_ = 0.0;
};

enum class UnOp { Neg, Not };
enum class BinOp { Add, Sub, Mul, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

Value apply(UnOp op, const Value& a);
Value apply(BinOp op, const Value& a, const Value& b);

bool is_comparison(BinOp op);
/// Logical negation of a comparison operator (`<` becomes `>=`).
BinOp negate_comparison(BinOp op);
/// Operator obtained by swapping operands (`<` becomes `>`).
BinOp mirror_comparison(BinOp op);
const char* symbol(BinOp op);
const char* symbol(UnOp op);

std::int64_t saturating_add(std::int64_t a, std::int64_t b);
std::int64_t saturating_sub(std::int64_t a, std::int64_t b);
std::int64_t saturating_mul(std::int64_t a, std::int64_t b);

}  // namespace sfv
