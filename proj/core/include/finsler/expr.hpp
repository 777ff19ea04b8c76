#pragma once

// Arithmetic expressions over coordinates x1..xd with exact symbolic
// differentiation.
//
// Grammar (whitespace insignificant):
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := '-' unary | power
//   power    := primary ('^' exponent)?
//   exponent := '-' exponent | power            (right-associative)
//   primary  := number | coordinate | constant | func '(' expr ')' | '(' expr ')'
//   func     := exp | log | sin | cos | sqrt
//   coordinate := 'x' [1-9][0-9]*               (1-based)
//
// Constants are substituted at parse time from a caller-supplied table.
// Expr values are immutable and cheap to copy (shared, reference-counted
// trees); evaluation is pure and safe to run concurrently.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "finsler/dual.hpp"
#include "finsler/errors.hpp"

namespace finsler {

using ConstantTable = std::map<std::string, double, std::less<>>;

class Expr {
 public:
  enum class Kind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Exp, Log, Sin, Cos, Sqrt };

  // The literal 0.
  Expr();

  static Expr number(double value, std::string label = {});
  static Expr variable(std::size_t index);
  static Expr unary(Kind kind, Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const noexcept;
  double value() const noexcept;
  std::size_t index() const noexcept;
  const Expr& operand(std::size_t i) const noexcept;

  bool is_number() const noexcept { return kind() == Kind::Number; }
  bool is_number(double v) const noexcept { return is_number() && value() == v; }

  // One past the largest coordinate index referenced, 0 for constants.
  std::size_t dimension() const noexcept;

  // Number of nodes in the tree (shared subtrees counted once per use).
  std::size_t size() const noexcept;

  std::string str() const;

  template <class T>
  T eval(std::span<const T> x) const;

  double operator()(std::span<const double> x) const { return eval<double>(x); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  template <class T>
  T eval_power(std::span<const T> x) const;

  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  std::size_t index = 0;
  std::string label;
  std::array<Expr, 2> operands{Expr(nullptr), Expr(nullptr)};
  std::size_t dimension = 0;
  std::size_t size = 1;
};

Expr parse(std::string_view text, const ConstantTable& constants = {});

// d e / d x_{var}, var is 0-based. Light constant folding only (0 and 1
// identities, literal arithmetic); no algebraic simplification.
Expr diff(const Expr& e, std::size_t var);

double eval(const Expr& e, std::span<const double> x);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// ---- implementation ---------------------------------------------------------

inline Expr::Kind Expr::kind() const noexcept { return node_->kind; }
inline double Expr::value() const noexcept { return node_->value; }
inline std::size_t Expr::index() const noexcept { return node_->index; }
inline const Expr& Expr::operand(std::size_t i) const noexcept { return node_->operands[i]; }
inline std::size_t Expr::dimension() const noexcept { return node_->dimension; }
inline std::size_t Expr::size() const noexcept { return node_->size; }

template <class T>
T Expr::eval(std::span<const T> x) const {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Number:
      return T(n.value);
    case Kind::Variable:
      if (n.index >= x.size()) {
        throw DomainError("coordinate x" + std::to_string(n.index + 1) + " outside point of dimension " +
                          std::to_string(x.size()));
      }
      return x[n.index];
    case Kind::Negate:
      return -n.operands[0].eval(x);
    case Kind::Add:
      return n.operands[0].eval(x) + n.operands[1].eval(x);
    case Kind::Subtract:
      return n.operands[0].eval(x) - n.operands[1].eval(x);
    case Kind::Multiply:
      return n.operands[0].eval(x) * n.operands[1].eval(x);
    case Kind::Divide: {
      const T num = n.operands[0].eval(x);
      const T den = n.operands[1].eval(x);
      if (primal(den) == 0.0) throw DomainError("division by zero in " + str());
      return num / den;
    }
    case Kind::Power:
      return eval_power(x);
    case Kind::Exp:
      return exp(n.operands[0].eval(x));
    case Kind::Log: {
      const T arg = n.operands[0].eval(x);
      if (!(primal(arg) > 0.0)) throw DomainError("log of non-positive value in " + str());
      return log(arg);
    }
    case Kind::Sin:
      return sin(n.operands[0].eval(x));
    case Kind::Cos:
      return cos(n.operands[0].eval(x));
    case Kind::Sqrt: {
      const T arg = n.operands[0].eval(x);
      if (primal(arg) < 0.0) throw DomainError("sqrt of negative value in " + str());
      return sqrt(arg);
    }
  }
  throw DomainError("corrupt expression node");
}

template <class T>
T Expr::eval_power(std::span<const T> x) const {
  using std::pow;
  const Expr& exponent = operand(1);
  const T base = operand(0).eval(x);
  const double b = primal(base);
  if (exponent.is_number()) {
    const double c = exponent.value();
    if (c == std::round(c) && std::fabs(c) < 1e9) {
      if (b == 0.0 && c < 0.0) throw DomainError("division by zero in " + str());
      return ipow(base, static_cast<long long>(c));
    }
    if (b < 0.0) throw DomainError("negative base with non-integer exponent in " + str());
    if (b == 0.0) return T(0.0);
    return pow(base, c);
  }
  if (!(b > 0.0)) throw DomainError("non-positive base with variable exponent in " + str());
  return pow(base, exponent.eval(x));
}

}  // namespace finsler
