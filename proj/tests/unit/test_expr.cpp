#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "finsler/expr.hpp"

namespace finsler {
namespace {

double at(const Expr& e, std::initializer_list<double> x) {
  const std::vector<double> v(x);
  return e(std::span<const double>(v));
}

TEST(ExprParse, PolynomialEvaluates) { EXPECT_DOUBLE_EQ(at(parse("x1^2 + x2^2"), {3, 4}), 25.0); }

TEST(ExprParse, StandardFunction) { EXPECT_NEAR(at(parse("exp(x3)"), {0, 0, 1}), 2.718281828459045, 1e-15); }

TEST(ExprParse, TrailingOperatorReportsOffset) {
  try {
    parse("x1 +");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(ExprParse, Precedence) {
  EXPECT_DOUBLE_EQ(at(parse("2 + 3*4"), {}), 14.0);
  EXPECT_DOUBLE_EQ(at(parse("-2^2"), {}), -4.0);
  EXPECT_DOUBLE_EQ(at(parse("2^3^2"), {}), 512.0);
  EXPECT_DOUBLE_EQ(at(parse("8/4/2"), {}), 1.0);
  EXPECT_DOUBLE_EQ(at(parse("8-4-2"), {}), 2.0);
  EXPECT_DOUBLE_EQ(at(parse("x1^-2"), {2}), 0.25);
  EXPECT_DOUBLE_EQ(at(parse("1.5e2 * (x1 - 1)"), {3}), 300.0);
}

TEST(ExprParse, RejectsUnknownIdentifier) { EXPECT_THROW(parse("foo + 1"), ParseError); }

TEST(ExprParse, RejectsArityMismatch) {
  EXPECT_THROW(parse("exp"), ParseError);
  EXPECT_THROW(parse("sin(x1, x2)"), ParseError);
  EXPECT_THROW(parse("x1(2)"), ParseError);
}

TEST(ExprParse, RejectsZeroCoordinateAndEmptyText) {
  EXPECT_THROW(parse("x0"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(x1"), ParseError);
}

TEST(ExprParse, ConstantsBindAtParseTime) {
  ConstantTable c{{"q", 0.1}};
  const Expr e = parse("q*x3", c);
  EXPECT_DOUBLE_EQ(at(e, {0, 0, 2}), 0.2);
  c["q"] = 5.0;
  EXPECT_DOUBLE_EQ(at(e, {0, 0, 2}), 0.2);
}

TEST(ExprDiff, Product) {
  const Expr d = diff(parse("x1*x2"), 0);
  EXPECT_EQ(d.str(), "x2");
}

TEST(ExprDiff, Exponential) { EXPECT_EQ(diff(parse("exp(x3)"), 2).str(), "exp(x3)"); }

TEST(ExprDiff, MixedPartial) { EXPECT_DOUBLE_EQ(at(diff(diff(parse("x1^2*x2"), 0), 1), {1, 1}), 2.0); }

TEST(ExprDiff, FunctionsMatchCalculus) {
  const double x = 0.7;
  EXPECT_NEAR(at(diff(parse("log(x1)"), 0), {x}), 1 / x, 1e-15);
  EXPECT_NEAR(at(diff(parse("sin(x1)"), 0), {x}), std::cos(x), 1e-15);
  EXPECT_NEAR(at(diff(parse("cos(x1)"), 0), {x}), -std::sin(x), 1e-15);
  EXPECT_NEAR(at(diff(parse("sqrt(x1)"), 0), {x}), 0.5 / std::sqrt(x), 1e-15);
  EXPECT_NEAR(at(diff(parse("x1^x1"), 0), {x}), std::pow(x, x) * (std::log(x) + 1), 1e-14);
  EXPECT_NEAR(at(diff(parse("x1^2.5"), 0), {x}), 2.5 * std::pow(x, 1.5), 1e-14);
}

TEST(ExprEval, DomainErrorsNameTheSubexpression) {
  try {
    at(parse("1 + x1/x2"), {1, 0});
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("x1/x2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(at(parse("log(x1)"), {0}), DomainError);
  EXPECT_THROW(at(parse("sqrt(x1)"), {-1}), DomainError);
  EXPECT_THROW(at(parse("x1^0.5"), {-1}), DomainError);
}

TEST(ExprEval, Examples) {
  EXPECT_DOUBLE_EQ(at(parse("sqrt(x1)"), {4}), 2.0);
  EXPECT_DOUBLE_EQ(at(parse("x1^3"), {2}), 8.0);
}

// Random polynomial trees over x1..x3, depth <= 5.
Expr random_polynomial(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_int_distribution<std::size_t> var(0, 2);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng)) {
    case 0:
      return Expr::number(std::round(coef(rng) * 100) / 100);
    case 1:
      return Expr::variable(var(rng));
    case 2:
      return Expr::binary(Expr::Kind::Add, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 3:
      return Expr::binary(Expr::Kind::Subtract, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    case 4:
      return Expr::binary(Expr::Kind::Multiply, random_polynomial(rng, depth - 1), random_polynomial(rng, depth - 1));
    default:
      return Expr::binary(Expr::Kind::Power, random_polynomial(rng, depth - 1),
                          Expr::number(static_cast<double>(std::uniform_int_distribution<int>(2, 3)(rng))));
  }
}

TEST(ExprProperty, DerivativeMatchesCentralDifference) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  for (int n = 0; n < 200; ++n) {
    const Expr e = random_polynomial(rng, 5);
    std::vector<double> x{u(rng), u(rng), u(rng)};
    for (std::size_t i = 0; i < 3; ++i) {
      const double exact = diff(e, i)(std::span<const double>(x));
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (e(std::span<const double>(xp)) - e(std::span<const double>(xm))) / (2 * h);
      const double scale = std::max({1.0, std::fabs(exact), std::fabs(e(std::span<const double>(x)))});
      EXPECT_NEAR(fd, exact, 1e-6 * scale) << e.str() << " d/dx" << i + 1;
    }
  }
}

TEST(ExprProperty, MixedPartialsCommute) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    const Expr e = random_polynomial(rng, 5);
    std::vector<double> x{u(rng), u(rng), u(rng)};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double a = diff(diff(e, i), j)(std::span<const double>(x));
        const double b = diff(diff(e, j), i)(std::span<const double>(x));
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::fabs(a))) << e.str();
      }
    }
  }
}

TEST(ExprProperty, EvaluationIsDeterministic) {
  const Expr e = parse("sin(x1)*exp(x2) + log(1 + x3^2)/sqrt(2 + x1)");
  const std::vector<double> x{0.3, -0.2, 0.9};
  EXPECT_EQ(e(std::span<const double>(x)), e(std::span<const double>(x)));
}

}  // namespace
}  // namespace finsler
