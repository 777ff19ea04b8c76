#pragma once

// Differentiation oracles in the direction argument and small dense linear
// algebra. Everything here is independent of the closed-form tensor formulas
// it is used to check.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

#include "finsler/dual.hpp"

namespace finsler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense rank-3 array with d^3 entries, indexed (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * dim_ + j) * dim_ + k]; }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * dim_ + j) * dim_ + k]; }

  std::span<const double> data() const noexcept { return data_; }
  double max_abs() const noexcept;

  // Contract the last index with v: result(i, j) = T(i, j, k) v^k.
  Matrix contract_last(const Vector& v) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

double max_abs_difference(const Tensor3& a, const Tensor3& b);

struct SecondOrderJet {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

// Value, gradient and Hessian of f at y by hyper-dual propagation. `f` must
// be callable with std::span<const HyperDual<double>> and return
// HyperDual<double>. One evaluation per (i <= j) pair.
template <class F>
SecondOrderJet jet_eval(F&& f, const Vector& y) {
  using H = HyperDual<double>;
  const auto d = static_cast<std::size_t>(y.size());
  SecondOrderJet jet;
  jet.gradient = Vector::Zero(static_cast<Eigen::Index>(d));
  jet.hessian = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  std::vector<H> arg(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        arg[k] = H(y[static_cast<Eigen::Index>(k)], k == i ? 1.0 : 0.0, k == j ? 1.0 : 0.0, 0.0);
      }
      const H r = f(std::span<const H>(arg));
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      jet.value = r.f;
      if (i == j) jet.gradient[ii] = r.a;
      jet.hessian(ii, jj) = r.ab;
      jet.hessian(jj, ii) = r.ab;
    }
  }
  return jet;
}

// All third partial derivatives of f at y, via HyperDual<Dual<double>>.
template <class F>
Tensor3 third_derivatives(F&& f, const Vector& y) {
  using D = Dual<double>;
  using H = HyperDual<D>;
  const auto d = static_cast<std::size_t>(y.size());
  Tensor3 out(d);
  std::vector<H> arg(d);
  for (std::size_t m = 0; m < d; ++m) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
          arg[k] = H(D(y[static_cast<Eigen::Index>(k)], k == m ? 1.0 : 0.0), D(k == i ? 1.0 : 0.0),
                     D(k == j ? 1.0 : 0.0), D(0.0));
        }
        const H r = f(std::span<const H>(arg));
        out(i, j, m) = r.ab.d;
        out(j, i, m) = r.ab.d;
      }
    }
  }
  return out;
}

// Gradient by first-order dual propagation, one pass per coordinate.
template <class F>
Vector dual_gradient(F&& f, const Vector& y) {
  using D = Dual<double>;
  const auto d = static_cast<std::size_t>(y.size());
  Vector g(static_cast<Eigen::Index>(d));
  std::vector<D> arg(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) arg[k] = D(y[static_cast<Eigen::Index>(k)], k == i ? 1.0 : 0.0);
    g[static_cast<Eigen::Index>(i)] = f(std::span<const D>(arg)).d;
  }
  return g;
}

struct FiniteDifferenceOptions {
  double step = 1e-4;
  bool richardson = false;  // combine steps h and h/2: (4 H(h/2) - H(h)) / 3
};

// Central-difference Hessian, symmetrized. `f` is callable with
// std::span<const double>.
template <class F>
Matrix fd_hessian(F&& f, const Vector& y, const FiniteDifferenceOptions& opts = {});

struct PdCheck {
  bool positive_definite = false;
  std::size_t pivot = 0;       // 1-based index of the first non-positive pivot, 0 on success
  double pivot_value = 0.0;    // value of that pivot (or the smallest pivot on success)
};

// Cholesky factorization with strictly positive pivots. Throws
// std::invalid_argument for a non-square or non-symmetric input.
PdCheck pd_check(const Matrix& m);

struct LeastSquares {
  Vector solution;
  double residual_norm = 0.0;
};

// min ||A s - rhs||_2; minimum-norm solution when A is rank deficient.
LeastSquares least_squares(const Matrix& a, const Vector& rhs);

// ---- implementation ---------------------------------------------------------

namespace detail {

template <class F>
Matrix central_hessian(F& f, const Vector& y, double h) {
  const Eigen::Index d = y.size();
  Matrix hess(d, d);
  Vector p = y;
  auto at = [&](const Vector& v) { return f(std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))); };
  const double f0 = at(y);
  for (Eigen::Index i = 0; i < d; ++i) {
    p = y;
    p[i] += h;
    const double fp = at(p);
    p[i] = y[i] - h;
    const double fm = at(p);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      p = y;
      p[i] += h;
      p[j] += h;
      const double fpp = at(p);
      p[j] = y[j] - h;
      const double fpm = at(p);
      p[i] = y[i] - h;
      const double fmm = at(p);
      p[j] = y[j] + h;
      const double fmp = at(p);
      hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return hess;
}

}  // namespace detail

template <class F>
Matrix fd_hessian(F&& f, const Vector& y, const FiniteDifferenceOptions& opts) {
  if (!(opts.step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  Matrix h1 = detail::central_hessian(f, y, opts.step);
  if (opts.richardson) {
    const Matrix h2 = detail::central_hessian(f, y, 0.5 * opts.step);
    h1 = (4.0 * h2 - h1) / 3.0;
  }
  return 0.5 * (h1 + h1.transpose());
}

}  // namespace finsler
