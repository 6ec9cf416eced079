#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfverify/ast.hpp"

namespace sfv {

struct Diagnostic {
  SourceLoc loc;
  std::string message;

  /// "line:col: message", or just the message when no position is known.
  std::string str() const;
};

using Diagnostics = std::vector<Diagnostic>;

std::string join(const Diagnostics& ds, const std::string& sep = "\n");

/// Thrown by frontends when a document cannot be turned into a model.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostics ds);
  const Diagnostics& diagnostics() const { return diagnostics_; }

 private:
  Diagnostics diagnostics_;
};

/// A frontend result: the model, or the diagnostics that prevented it.
template <typename T>
struct Parsed {
  std::optional<T> value;
  Diagnostics diagnostics;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
  /// The model, or throws ParseError carrying the diagnostics.
  const T& get() const {
    if (!value) throw ParseError(diagnostics);
    return *value;
  }
};

}  // namespace sfv
