#pragma once

// (alpha, beta)-metric spaces: the Riemannian data a_ij(x), the 1-form
// b_i(x), and the metric functions F(alpha, beta) of each supported family.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finsler/dual.hpp"
#include "finsler/errors.hpp"
#include "finsler/expr.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

enum class Family {
  GeneralizedSquare,   // (a + b)^(k+1) / a^k
  Square,              // (a + b)^2 / a
  Randers,             // a + b
  Kropina,             // a^2 / b,            b > 0
  GeneralizedKropina,  // a^(k+1) / b^k,      b > 0
  Matsumoto,           // a^2 / (a - b),      a - b > 0
  Riemannian,          // a
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

class SpaceSpec {
 public:
  // `a` is row-major dim x dim.
  SpaceSpec(std::size_t dim, int exponent, Family family, std::vector<Expr> a, std::vector<Expr> b);

  // b_i = d potential / d x^i, differentiated symbolically.
  static SpaceSpec from_potential(std::size_t dim, int exponent, Family family, std::vector<Expr> a,
                                  Expr potential);

  std::size_t dim() const noexcept { return dim_; }
  int exponent() const noexcept { return exponent_; }
  Family family() const noexcept { return family_; }
  const Expr& a(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  const Expr& b(std::size_t i) const { return b_[i]; }
  const std::optional<Expr>& potential() const noexcept { return potential_; }

  // Returns the same space with b scaled by mu (and the potential, if any).
  SpaceSpec with_scaled_b(double mu) const;
  SpaceSpec with_family(Family family, int exponent) const;

  // a(x); throws DegenerateMetricError if not symmetric positive definite.
  Matrix a_at(const Vector& x) const;
  Vector b_at(const Vector& x) const;
  // (i, j, l) -> d_l a_ij
  Tensor3 da_at(const Vector& x) const;
  // (i, l) -> d_l b_i
  Matrix db_at(const Vector& x) const;

  template <class T>
  T a_entry(std::size_t i, std::size_t j, std::span<const T> x) const {
    return a(i, j).eval(x);
  }
  template <class T>
  T b_entry(std::size_t i, std::span<const T> x) const {
    return b(i).eval(x);
  }

 private:
  std::size_t dim_;
  int exponent_;
  Family family_;
  std::vector<Expr> a_;
  std::vector<Expr> b_;
  std::optional<Expr> potential_;
  std::vector<Expr> da_;  // (i*dim + j)*dim + l
  std::vector<Expr> db_;  // i*dim + l
};

// A base point with a nonzero direction, plus the quantities every tensor
// formula needs: alpha, beta, a(x), b(x) and the lowered direction y_i.
struct FlagPoint {
  Vector x;
  Vector y;
  double alpha = 0.0;
  double beta = 0.0;
  Matrix a;
  Vector b;
  Vector y_lower;
};

// Throws ZeroDirectionError for y == 0 and DegenerateMetricError when a(x)
// is not positive definite.
FlagPoint make_flag(const SpaceSpec& spec, const Vector& x, const Vector& y);

std::pair<double, double> alpha_beta(const SpaceSpec& spec, const Vector& x, const Vector& y);

struct PhiPartials {
  double F = 0.0;
  double F_a = 0.0;
  double F_b = 0.0;
  double F_aa = 0.0;
  double F_bb = 0.0;
  double F_ab = 0.0;
};

// Empty when (alpha, beta) lies in the family's domain, otherwise the reason.
std::optional<std::string> family_domain_violation(Family family, double alpha, double beta);

// Closed-form F and its first and second partials in (alpha, beta).
// Throws DomainError naming the family outside its domain.
PhiPartials phi_partials(Family family, int k, double alpha, double beta);

template <class T>
T phi_value(Family family, int k, const T& alpha, const T& beta) {
  switch (family) {
    case Family::GeneralizedSquare:
      return ipow(alpha + beta, k + 1) / ipow(alpha, k);
    case Family::Square:
      return ipow(alpha + beta, 2) / alpha;
    case Family::Randers:
      return alpha + beta;
    case Family::Kropina:
      return alpha * alpha / beta;
    case Family::GeneralizedKropina:
      return ipow(alpha, k + 1) / ipow(beta, k);
    case Family::Matsumoto:
      return alpha * alpha / (alpha - beta);
    case Family::Riemannian:
      return alpha;
  }
  throw DomainError("unknown metric family");
}

// F(x, y) with a(x), b(x) already evaluated; generic in the scalar type of y
// so the differentiation oracles can run through it.
template <class T>
T finsler_norm(Family family, int k, const Matrix& a, const Vector& b, std::span<const T> y) {
  using std::sqrt;
  const auto d = static_cast<Eigen::Index>(y.size());
  T alpha2(0.0);
  T beta(0.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    T row(0.0);
    for (Eigen::Index j = 0; j < d; ++j) row = row + a(i, j) * y[static_cast<std::size_t>(j)];
    alpha2 = alpha2 + row * y[static_cast<std::size_t>(i)];
    beta = beta + b[i] * y[static_cast<std::size_t>(i)];
  }
  return phi_value(family, k, T(sqrt(alpha2)), beta);
}

// F(x, y) with both arguments generic (used by the geodesic gradient).
template <class T>
T finsler_norm(const SpaceSpec& spec, std::span<const T> x, std::span<const T> y) {
  using std::sqrt;
  const std::size_t d = spec.dim();
  T alpha2(0.0);
  T beta(0.0);
  for (std::size_t i = 0; i < d; ++i) {
    T row(0.0);
    for (std::size_t j = 0; j < d; ++j) row = row + spec.a_entry<T>(i, j, x) * y[j];
    alpha2 = alpha2 + row * y[i];
    beta = beta + spec.b_entry<T>(i, x) * y[i];
  }
  const T alpha = sqrt(alpha2);
  if (auto why = family_domain_violation(spec.family(), primal(alpha), primal(beta))) throw DomainError(*why);
  return phi_value(spec.family(), spec.exponent(), alpha, beta);
}

double finsler_norm(const SpaceSpec& spec, const Vector& x, const Vector& y);

// Pointwise admissibility of a flag. A report, never an exception (except
// for y == 0, which cannot form a flag at all).
struct ValidityReport {
  bool alpha_positive = false;
  bool f_positive = false;
  bool family_domain = false;
  bool g_positive_definite = false;
  std::size_t pivot = 0;  // failing pivot of g (1-based), 0 if none
  std::string note;

  bool ok() const noexcept { return alpha_positive && f_positive && family_domain && g_positive_definite; }
};

ValidityReport validity_check(const SpaceSpec& spec, const Vector& x, const Vector& y);

}  // namespace finsler
