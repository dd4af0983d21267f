#pragma once

#include "curvedborn/types.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace curvedborn {

/// Small arithmetic expression language for user-defined surfaces and currents.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | name | name '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan sinh cosh tanh sqrt exp log abs.
/// Constants: pi, e. Any other name must be one of the declared variables.
/// Parse errors are reported as ErrorKind::ConfigError.
class Expression {
 public:
  static Expression parse(std::string_view source, const std::vector<std::string>& variables);

  /// Values are bound to the declared variables by position.
  double operator()(const Vec& values) const;

  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace curvedborn
