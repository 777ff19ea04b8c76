#pragma once

// Level hypersurfaces phi(x) = c of a Finsler space: an implicit chart at each
// base point, the projection factors B^i_a and their second derivatives, the
// unit normal, induced tensors, and the second fundamental tensors.

#include <cstddef>
#include <optional>
#include <vector>

#include "finsler/connection.hpp"
#include "finsler/expr.hpp"
#include "finsler/metric.hpp"
#include "finsler/tensors.hpp"

namespace finsler {

class LevelSurface {
 public:
  LevelSurface(Expr potential, double level, std::size_t dim);

  const Expr& potential() const noexcept { return potential_; }
  double level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return dim_; }

  double value(const Vector& x) const;
  double residual(const Vector& x) const { return value(x) - level_; }
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  // Newton steps along the gradient until |phi(x) - c| <= tol. Empty when the
  // iteration does not converge or meets a vanishing gradient.
  std::optional<Vector> project(const Vector& x, double tol = 1e-13, int max_iter = 60) const;

 private:
  Expr potential_;
  double level_;
  std::size_t dim_;
  std::vector<Expr> grad_;
  std::vector<Expr> hess_;  // row-major
};

// Local parametrization around a surface point: the coordinate with the
// largest |d phi / dx^i| is solved for, the others are the parameters u^a.
struct Chart {
  Vector x;
  std::size_t dependent = 0;
  std::vector<std::size_t> params;  // d - 1 ambient indices, ascending
  Matrix B;                         // d x (d-1), B(i, a) = dx^i/du^a
  std::vector<Matrix> B2;           // B2[i](a, b) = d2 x^i / du^a du^b
};

// Throws Error when x0 is off the surface by more than tol, DomainError on a
// vanishing gradient.
Chart chart_at(const LevelSurface& surface, const Vector& x0, double tol = 1e-10);

// y = B v; throws ZeroDirectionError for v = 0 and DomainError when the
// 1-form does not annihilate y (|beta| above 1e-10 relative).
FlagPoint tangential_flag(const SpaceSpec& spec, const Chart& chart, const Vector& v);

struct UnitNormal {
  Vector up;  // N^i
  Vector dn;  // N_i = g_ij N^j
};

// Solves g_ij B^i_a N^j = 0, normalizes g(N, N) = 1 and orients N along
// increasing phi. Throws DegenerateMetricError when the system is singular.
UnitNormal unit_normal(const Matrix& B, const Matrix& g, const Vector& surface_gradient);

struct InducedTensors {
  Matrix g;    // g_ab
  Matrix h;    // h_ab
  Tensor3 C;   // C_abc
};

InducedTensors induced_tensors(const Matrix& B, const TensorBundle& bundle);

struct HypersurfaceFrame {
  Chart chart;
  FlagPoint flag;
  Vector v;
  TensorBundle bundle;
  UnitNormal normal;
  Matrix B_dual;  // (d-1) x d, B_dual(a, i) = B_i^a
  InducedTensors induced;
};

HypersurfaceFrame build_frame(const SpaceSpec& spec, const LevelSurface& surface, const Vector& x0,
                              const Vector& v);

struct FrameResiduals {
  double orthogonality = 0.0;   // max |g_ij B^i_a N^j|
  double normalization = 0.0;   // |g_ij N^i N^j - 1|
  double duality = 0.0;         // max |B^i_a B_i^b - delta|
  double completeness = 0.0;    // max |B^i_a B_j^a + N^i N_j - delta|
  double annihilation = 0.0;    // max |b_i B^i_a|
  double beta = 0.0;            // |b_i y^i|
};

FrameResiduals frame_residuals(const HypersurfaceFrame& frame);

struct SecondFundamentalV {
  Matrix M;   // M_ab = C_ijk B^i_a B^j_b N^k
  Vector Mv;  // M_a = C_ijk B^i_a N^j N^k
};

SecondFundamentalV second_fundamental_v(const HypersurfaceFrame& frame);

struct SecondFundamentalH {
  Vector H;         // H_a
  double H0 = 0.0;  // H_a v^a
  Matrix Hab;       // H_ab
  double sym_residual = 0.0;     // max |H_ab - H_ba - (M_a H_b - M_b H_a)|
  double h0_residual = 0.0;      // max |H_0b - H_b|
  double hb0_residual = 0.0;     // max |H_b0 - H_b - M_b H_0|
};

// Cartan horizontal coefficients are taken as Gamma + D.
SecondFundamentalH normal_curvature_and_H(const HypersurfaceFrame& frame, const Tensor3& gamma_star,
                                          const SecondFundamentalV& mv);

// Gamma + D at the frame's flag.
Tensor3 cartan_coefficients(const FlagPoint& flag, const TensorBundle& bundle, const ConnectionData& conn);

}  // namespace finsler
