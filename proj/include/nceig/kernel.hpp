#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace nceig {

/// Expression tree for kernels k(x, u).
///
/// Grammar (whitespace insignificant, lowest precedence first):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary (('^' | '**') unary)?       right-associative
///   primary := number | 'x' | 'u' | func '(' expr ')' | '(' expr ')'
///   func    := exp | sin | cos | sqrt | abs | log
///
/// So -x^2 is -(x^2) and 2^3^2 is 2^(3^2). Implicit multiplication is
/// rejected.
struct Expr {
  enum class Kind { number, var_x, var_u, add, sub, mul, div, pow, neg, func };
  enum class Func { exp, sin, cos, sqrt, abs, log };

  Kind kind = Kind::number;
  double value = 0.0;  // number literal
  Func func = Func::exp;
  std::unique_ptr<Expr> lhs;  // operand of neg/func, left side of binaries
  std::unique_ptr<Expr> rhs;

  // Structural equality; literals compare by value.
  friend bool operator==(const Expr& a, const Expr& b);
};

using ExprPtr = std::unique_ptr<Expr>;

// Throws ParseError (with byte offset) or UnknownIdentifierError.
ExprPtr parse_kernel(std::string_view text);

// Canonical form: binary operations and negations nested inside another
// operation are parenthesised, literals use the shortest round-trip spelling.
std::string to_string(const Expr& e);

// Raw IEEE evaluation; no finiteness check.
double evaluate(const Expr& e, double x, double u);

/// A kernel: one of the built-in difference kernels or a parsed expression.
class Kernel {
 public:
  enum class Builtin { gaussian, cauchy };

  static Kernel gaussian();  // exp(-(u - x)^2)
  static Kernel cauchy();    // 1 / (1 + (u - x)^2)
  static Kernel from_expression(std::string_view text);
  // Built-in name ("gaussian" | "cauchy") or an expression.
  static Kernel from_spec(std::string_view text);

  bool is_builtin() const noexcept { return expr_ == nullptr; }
  const std::string& source() const noexcept { return source_; }

  // Unchecked evaluation.
  double raw(double x, double u) const;

 private:
  Kernel(Builtin b, std::string source) : builtin_(b), source_(std::move(source)) {}
  Kernel(std::shared_ptr<const Expr> e, std::string source)
      : expr_(std::move(e)), source_(std::move(source)) {}

  Builtin builtin_ = Builtin::gaussian;
  std::shared_ptr<const Expr> expr_;
  std::string source_;
};

// Throws NonFiniteKernelError carrying (x, u) for NaN/inf results.
double eval_kernel(const Kernel& k, double x, double u);

}  // namespace nceig
