#include "sfverify/diagnostics.hpp"

namespace sfv {

std::string Diagnostic::str() const {
  if (loc.line <= 0) return message;
  return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message;
}

std::string join(const Diagnostics& ds, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) out += sep;
    out += ds[i].str();
  }
  return out;
}

ParseError::ParseError(Diagnostics ds)
    : std::runtime_error(ds.empty() ? std::string("parse error") : join(ds)), diagnostics_(std::move(ds)) {}

}  // namespace sfv
