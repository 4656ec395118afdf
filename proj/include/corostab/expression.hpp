#pragma once

// A small expression language for scalar functions of three variables.
//
//   expr    := term   { ('+' | '-') term }
//   term    := unary  { ('*' | '/') unary }
//   unary   := ('-' | '+') unary | power
//   power   := primary [ '^' unary ]            (right-associative)
//   primary := number | name | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sqrt | abs | sum
//
// Names x1, x2, x3 are the variables and s = x1 + x2 + x3. Any other name
// is a parameter resolved at evaluation (or bind) time. sum(body) is
// expanded at parse time into body[x:=x1] + body[x:=x2] + body[x:=x3];
// the bare name x is only legal inside sum. Unary minus binds weaker than
// '^', so -x1^2 is -(x1^2).

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corostab/tensor.hpp"

namespace corostab {

using ParameterMap = std::map<std::string, double, std::less<>>;

struct Token {
  enum class Kind { Number, Identifier, Operator, LeftParen, RightParen, Comma, End };
  Kind kind;
  std::string lexeme;
  std::size_t position;
  double value = 0.0;  ///< numbers only
};

/// Throws LexError on characters outside the language.
std::vector<Token> tokenize(std::string_view source);

struct EvalContext {
  Vector3 x = Vector3::Zero();
  const ParameterMap* parameters = nullptr;
};

/// Immutable expression tree stored as a flat node array.
class ExprAst {
 public:
  enum class Op { Constant, Variable, Parameter, Neg, Exp, Log, Sqrt, Abs, Add, Sub, Mul, Div, Pow };

  struct Node {
    Op op;
    double value = 0.0;  ///< Constant
    int slot = -1;       ///< Variable: 0..2 for x1..x3, 3 for s; Parameter: index into names
    int lhs = -1;
    int rhs = -1;
  };

  ExprAst(std::vector<Node> nodes, int root, std::vector<std::string> parameter_names);

  /// Throws EvalError on an unbound parameter or a domain violation
  /// (log or sqrt of an out-of-domain value, pow producing NaN).
  double evaluate(const EvalContext& ctx) const;
  double evaluate(const Vector3& x) const { return evaluate(EvalContext{x, nullptr}); }

  /// Copy with every parameter replaced by its value. Throws EvalError if a
  /// parameter is missing from the map.
  ExprAst bind(const ParameterMap& parameters) const;

  /// Fully parenthesized source that reparses to an equivalent tree.
  std::string to_string() const;

  const std::vector<std::string>& parameter_names() const noexcept { return parameter_names_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int root() const noexcept { return root_; }

 private:
  double eval_node(int index, const EvalContext& ctx) const;
  void print_node(int index, std::string& out) const;

  std::vector<Node> nodes_;
  int root_;
  std::vector<std::string> parameter_names_;
};

/// Throws ParseError with position and expected-set.
ExprAst parse(const std::vector<Token>& tokens);
ExprAst parse_expression(std::string_view source);

/// Result of a permutation-equivariance check of a vector function
/// f: R^3 -> R^3, i.e. f_{p(i)}(y) == f_i(x) whenever y_{p(k)} = x_k.
struct EquivarianceVerdict {
  bool equivariant = true;
  struct Witness {
    Vector3 x;
    std::array<int, 3> permutation;
    int component;
    double expected;
    double actual;
  };
  std::optional<Witness> witness;  ///< first failure, if any
};

using VectorFunction = std::function<Vector3(const Vector3&)>;

EquivarianceVerdict check_permutation_equivariance(const VectorFunction& f, int samples, std::uint64_t seed,
                                                   double box = 1.0, double tolerance = 1e-9);

/// Convenience overload over three component expressions (already bound
/// or evaluated against `parameters`). Propagates EvalError.
EquivarianceVerdict check_permutation_equivariance(const std::array<ExprAst, 3>& components,
                                                   const ParameterMap& parameters, int samples,
                                                   std::uint64_t seed);

/// Replaces every "{i}" in a component template with the digit 1, 2 or 3.
std::string expand_component_template(std::string_view templ, int component);

}  // namespace corostab
