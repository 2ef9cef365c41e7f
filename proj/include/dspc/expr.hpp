#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dspc/interval.hpp"

namespace dspc {

/// Immutable scalar expression over a declared list of named variables.
///
/// Nodes are shared and never mutated after construction, so an Expr can be
/// copied cheaply and evaluated from several threads at once. Variables are
/// referenced by slot (their position in variables()), which is what the
/// span-based evaluators index into.
class Expr {
 public:
  enum class Kind { constant, variable, neg, exp, log, sin, cos, sqrt, add, sub, mul, div, pow };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    double value = 0.0;     // constant
    std::size_t slot = 0;   // variable
    NodePtr lhs;            // unary operand or left operand
    NodePtr rhs;            // right operand
  };

  // Throws InvalidArgument if a variable slot is out of range or names repeat.
  Expr(NodePtr root, std::vector<std::string> variables);

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

  // Slot of a declared variable; throws UnknownIdentifier.
  std::size_t slot_of(std::string_view name) const;

  // Structural equality, including the declared variable list.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
  std::vector<std::string> variables_;
};

// Node builders, mainly for constructing trees programmatically.
Expr::NodePtr make_constant(double value);
Expr::NodePtr make_variable(std::size_t slot);
Expr::NodePtr make_unary(Expr::Kind kind, Expr::NodePtr operand);
Expr::NodePtr make_binary(Expr::Kind kind, Expr::NodePtr lhs, Expr::NodePtr rhs);

bool is_unary(Expr::Kind kind) noexcept;
bool is_binary(Expr::Kind kind) noexcept;

/// Parses `text` with the usual precedence: `^` binds tightest and is
/// right-associative, then unary minus, then `* /`, then `+ -`.
/// Recognized functions: exp, log, sin, cos, sqrt.
///
/// Throws SyntaxError (with a character position) or UnknownIdentifier.
Expr parse(std::string_view text, std::vector<std::string> variables);

// Fully parenthesized form; parse(to_string(e), e.variables()) == e for any
// tree the parser can produce (constants are non-negative there).
std::string to_string(const Expr& expr);

double eval_point(const Expr& expr, std::span<const double> values);
double eval_point(const Expr& expr, const std::map<std::string, double>& assignment);

/// Natural interval extension. Each node's result is widened outward by one
/// ulp whenever the floating-point operation was not exact.
///
/// pow with a constant integer exponent uses the even/odd power rule; any
/// other pow is evaluated as exp(y * log(x)) and needs x.lo > 0.
Interval eval_interval(const Expr& expr, std::span<const Interval> values);
Interval eval_interval(const Expr& expr, const std::map<std::string, Interval>& assignment);

// Replaces variable `name` by a constant and drops it from the variable list.
Expr bind_variable(const Expr& expr, std::string_view name, double value);

}  // namespace dspc
