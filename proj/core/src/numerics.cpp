#include "finsler/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finsler {

double Tensor3::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

Matrix Tensor3::contract_last(const Vector& v) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) s += (*this)(i, j, k) * v[static_cast<Eigen::Index>(k)];
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  }
  return out;
}

double max_abs_difference(const Tensor3& a, const Tensor3& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("tensor dimension mismatch");
  double m = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::fabs(da[i] - db[i]));
  return m;
}

PdCheck pd_check(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("pd_check: matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("pd_check: matrix is not symmetric");
  }
  const Eigen::Index n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  PdCheck result;
  result.pivot_value = n > 0 ? m(0, 0) : 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      result.positive_definite = false;
      result.pivot = static_cast<std::size_t>(j + 1);
      result.pivot_value = pivot;
      return result;
    }
    result.pivot_value = j == 0 ? pivot : std::min(result.pivot_value, pivot);
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  result.positive_definite = true;
  return result;
}

LeastSquares least_squares(const Matrix& a, const Vector& rhs) {
  if (a.rows() < 1) throw std::invalid_argument("least_squares: system has no rows");
  if (a.rows() != rhs.size()) throw std::invalid_argument("least_squares: row count mismatch");
  LeastSquares out;
  if (a.cols() == 0) {
    out.solution = Vector();
    out.residual_norm = rhs.norm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  out.solution = cod.solve(rhs);
  out.residual_norm = (a * out.solution - rhs).norm();
  return out;
}

}  // namespace finsler
