#include "sfverify/value.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace sfv {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

std::int64_t saturate_double(double d) {
  if (std::isnan(d)) return 0;
  if (d >= 9.2233720368547758e18) return kMax;
  if (d <= -9.2233720368547758e18) return kMin;
  return static_cast<std::int64_t>(d);
}

}  // namespace

std::string to_string(Sort s) {
  switch (s) {
    case Sort::Int: return "int";
    case Sort::Float: return "float";
    case Sort::Byte: return "u8";
  }
  return "?";
}

Value Value::real(double v) {
  Value r;
  r.is_float_ = true;
  r.f_ = v;
  return r;
}

std::int64_t Value::as_int() const { return is_float_ ? saturate_double(f_) : i_; }

Value Value::coerce(Sort s) const {
  switch (s) {
    case Sort::Float: return real(as_double());
    case Sort::Int: return integer(as_int());
    case Sort::Byte: {
      std::int64_t v = as_int();
      if (v < 0) v = 0;
      if (v > 255) v = 255;
      return integer(v);
    }
  }
  return *this;
}

bool Value::operator==(const Value& o) const {
  if (is_float_ != o.is_float_) return false;
  return is_float_ ? f_ == o.f_ : i_ == o.i_;
}

std::string Value::str() const {
  if (!is_float_) return std::to_string(i_);
  if (std::isfinite(f_) && f_ == std::floor(f_) && std::fabs(f_) < 1e15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f", f_);
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", f_);
  return buf;
}

std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) return b > 0 ? kMax : kMin;
  return r;
}

std::int64_t saturating_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) return b < 0 ? kMax : kMin;
  return r;
}

std::int64_t saturating_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return ((a < 0) != (b < 0)) ? kMin : kMax;
  return r;
}

Value apply(UnOp op, const Value& a) {
  switch (op) {
    case UnOp::Neg:
      if (a.is_float()) return Value::real(-a.as_double());
      return Value::integer(saturating_sub(0, a.as_int()));
    case UnOp::Not:
      return Value::boolean(!a.truthy());
  }
  return a;
}

Value apply(BinOp op, const Value& a, const Value& b) {
  const bool fl = a.is_float() || b.is_float();
  switch (op) {
    case BinOp::Add:
      return fl ? Value::real(a.as_double() + b.as_double())
                : Value::integer(saturating_add(a.as_int(), b.as_int()));
    case BinOp::Sub:
      return fl ? Value::real(a.as_double() - b.as_double())
                : Value::integer(saturating_sub(a.as_int(), b.as_int()));
    case BinOp::Mul:
      return fl ? Value::real(a.as_double() * b.as_double())
                : Value::integer(saturating_mul(a.as_int(), b.as_int()));
    case BinOp::Lt: return Value::boolean(fl ? a.as_double() < b.as_double() : a.as_int() < b.as_int());
    case BinOp::Le: return Value::boolean(fl ? a.as_double() <= b.as_double() : a.as_int() <= b.as_int());
    case BinOp::Gt: return Value::boolean(fl ? a.as_double() > b.as_double() : a.as_int() > b.as_int());
    case BinOp::Ge: return Value::boolean(fl ? a.as_double() >= b.as_double() : a.as_int() >= b.as_int());
    case BinOp::Eq: return Value::boolean(fl ? a.as_double() == b.as_double() : a.as_int() == b.as_int());
    case BinOp::Ne: return Value::boolean(fl ? a.as_double() != b.as_double() : a.as_int() != b.as_int());
    case BinOp::And: return Value::boolean(a.truthy() && b.truthy());
    case BinOp::Or: return Value::boolean(a.truthy() || b.truthy());
  }
  return a;
}

bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
    case BinOp::Eq:
    case BinOp::Ne: return true;
    default: return false;
  }
}

BinOp negate_comparison(BinOp op) {
  switch (op) {
    case BinOp::Lt: return BinOp::Ge;
    case BinOp::Le: return BinOp::Gt;
    case BinOp::Gt: return BinOp::Le;
    case BinOp::Ge: return BinOp::Lt;
    case BinOp::Eq: return BinOp::Ne;
    case BinOp::Ne: return BinOp::Eq;
    default: return op;
  }
}

BinOp mirror_comparison(BinOp op) {
  switch (op) {
    case BinOp::Lt: return BinOp::Gt;
    case BinOp::Le: return BinOp::Ge;
    case BinOp::Gt: return BinOp::Lt;
    case BinOp::Ge: return BinOp::Le;
    default: return op;
  }
}

const char* symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

const char* symbol(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

}  // namespace sfv
