#include "finsler/hypersurface.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

std::span<const double> as_span(const Vector& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

}  // namespace

LevelSurface::LevelSurface(Expr potential, double level, std::size_t dim)
    : potential_(std::move(potential)), level_(level), dim_(dim) {
  if (potential_.dimension() > dim_) {
    throw Error("surface potential references x" + std::to_string(potential_.dimension()) +
                " but the space has dimension " + std::to_string(dim_));
  }
  for (std::size_t i = 0; i < dim_; ++i) grad_.push_back(diff(potential_, i));
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) hess_.push_back(diff(grad_[i], j));
  }
}

double LevelSurface::value(const Vector& x) const { return potential_(as_span(x)); }

Vector LevelSurface::gradient(const Vector& x) const {
  Vector g(ix(dim_));
  for (std::size_t i = 0; i < dim_; ++i) g[ix(i)] = grad_[i](as_span(x));
  return g;
}

Matrix LevelSurface::hessian(const Vector& x) const {
  Matrix h(ix(dim_), ix(dim_));
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) h(ix(i), ix(j)) = hess_[i * dim_ + j](as_span(x));
  }
  return h;
}

std::optional<Vector> LevelSurface::project(const Vector& x, double tol, int max_iter) const {
  Vector p = x;
  for (int it = 0; it < max_iter; ++it) {
    double r;
    Vector g;
    try {
      r = residual(p);
      if (std::fabs(r) <= tol) return p;
      g = gradient(p);
    } catch (const DomainError&) {
      return std::nullopt;
    }
    const double gg = g.squaredNorm();
    if (!(gg > 1e-24)) return std::nullopt;
    p -= (r / gg) * g;
  }
  return std::nullopt;
}

Chart chart_at(const LevelSurface& surface, const Vector& x0, double tol) {
  const std::size_t d = surface.dim();
  const double r = surface.residual(x0);
  if (!(std::fabs(r) <= tol)) {
    throw Error("point is off the surface by " + std::to_string(r));
  }
  const Vector grad = surface.gradient(x0);
  Idx pivot = 0;
  const double gmax = grad.cwiseAbs().maxCoeff(&pivot);
  if (!(gmax > 1e-14)) throw DomainError("surface gradient vanishes at the chart point");

  Chart c;
  c.x = x0;
  c.dependent = static_cast<std::size_t>(pivot);
  for (std::size_t i = 0; i < d; ++i) {
    if (i != c.dependent) c.params.push_back(i);
  }
  const std::size_t m = d - 1;
  const double bD = grad[pivot];

  // phi_a = -b_{P_a} / b_D
  Vector dphi(ix(m));
  for (std::size_t a = 0; a < m; ++a) dphi[ix(a)] = -grad[ix(c.params[a])] / bD;

  c.B = Matrix::Zero(ix(d), ix(m));
  for (std::size_t a = 0; a < m; ++a) {
    c.B(ix(c.params[a]), ix(a)) = 1.0;
    c.B(pivot, ix(a)) = dphi[ix(a)];
  }

  const Matrix H = surface.hessian(x0);
  c.B2.assign(d, Matrix::Zero(ix(m), ix(m)));
  Matrix& phi2 = c.B2[c.dependent];
  for (std::size_t a = 0; a < m; ++a) {
    const Idx Pa = ix(c.params[a]);
    for (std::size_t b = 0; b < m; ++b) {
      const Idx Pb = ix(c.params[b]);
      const double num = H(Pa, Pb) + H(Pa, pivot) * dphi[ix(b)] + H(pivot, Pb) * dphi[ix(a)] +
                         H(pivot, pivot) * dphi[ix(a)] * dphi[ix(b)];
      phi2(ix(a), ix(b)) = -num / bD;
    }
  }
  return c;
}

FlagPoint tangential_flag(const SpaceSpec& spec, const Chart& chart, const Vector& v) {
  if (v.size() != chart.B.cols()) throw Error("tangent vector has the wrong dimension");
  if (v.cwiseAbs().maxCoeff() == 0.0) throw ZeroDirectionError();
  const Vector y = chart.B * v;
  FlagPoint f = make_flag(spec, chart.x, y);
  const double scale = f.b.norm() * y.norm();
  if (std::fabs(f.beta) > 1e-10 * std::max(1.0, scale)) {
    throw DomainError("the 1-form does not annihilate the tangent direction (beta = " + std::to_string(f.beta) +
                      ")");
  }
  return f;
}

UnitNormal unit_normal(const Matrix& B, const Matrix& g, const Vector& surface_gradient) {
  const Matrix A = B.transpose() * g;  // (d-1) x d
  Eigen::FullPivLU<Matrix> lu(A);
  const Matrix kernel = lu.kernel();
  if (lu.rank() != A.rows() || kernel.cols() != 1) {
    throw DegenerateMetricError("normal system is singular", static_cast<std::size_t>(lu.rank()) + 1);
  }
  Vector n = kernel.col(0);
  const double nn = n.dot(g * n);
  if (!(nn > 0.0)) throw DegenerateMetricError("fundamental tensor is not positive on the normal", 1);
  n /= std::sqrt(nn);
  if (surface_gradient.dot(n) < 0.0) n = -n;
  return {n, g * n};
}

InducedTensors induced_tensors(const Matrix& B, const TensorBundle& t) {
  InducedTensors r;
  r.g = B.transpose() * t.g * B;
  r.h = B.transpose() * t.h * B;
  const std::size_t d = t.C.dim();
  const std::size_t m = static_cast<std::size_t>(B.cols());
  r.C = Tensor3(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
              s += t.C(i, j, k) * B(ix(i), ix(a)) * B(ix(j), ix(b)) * B(ix(k), ix(c));
            }
          }
        }
        r.C(a, b, c) = s;
      }
    }
  }
  return r;
}

HypersurfaceFrame build_frame(const SpaceSpec& spec, const LevelSurface& surface, const Vector& x0,
                              const Vector& v) {
  HypersurfaceFrame f;
  f.chart = chart_at(surface, x0);
  f.flag = tangential_flag(spec, f.chart, v);
  f.v = v;
  f.bundle = compute_bundle(spec, f.flag);
  f.normal = unit_normal(f.chart.B, f.bundle.g, surface.gradient(x0));
  f.induced = induced_tensors(f.chart.B, f.bundle);
  const Matrix g_ind_inv = f.induced.g.inverse();
  f.B_dual = g_ind_inv * f.chart.B.transpose() * f.bundle.g;
  return f;
}

FrameResiduals frame_residuals(const HypersurfaceFrame& f) {
  const Matrix& B = f.chart.B;
  const auto d = B.rows();
  const auto m = B.cols();
  FrameResiduals r;
  r.orthogonality = (B.transpose() * f.bundle.g * f.normal.up).cwiseAbs().maxCoeff();
  r.normalization = std::fabs(f.normal.up.dot(f.bundle.g * f.normal.up) - 1.0);
  r.duality = (f.B_dual * B - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  r.completeness =
      (B * f.B_dual + f.normal.up * f.normal.dn.transpose() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  r.annihilation = (f.flag.b.transpose() * B).cwiseAbs().maxCoeff();
  r.beta = std::fabs(f.flag.beta);
  return r;
}

SecondFundamentalV second_fundamental_v(const HypersurfaceFrame& f) {
  const Matrix& B = f.chart.B;
  const Tensor3& C = f.bundle.C;
  const Matrix CN = C.contract_last(f.normal.up);  // C_ijk N^k
  SecondFundamentalV r;
  r.M = B.transpose() * CN * B;
  r.Mv = B.transpose() * CN * f.normal.up;
  return r;
}

Tensor3 cartan_coefficients(const FlagPoint& flag, const TensorBundle& bundle, const ConnectionData& conn) {
  const DifferenceIngredients ing = difference_ingredients(bundle, conn, flag);
  const Tensor3 D = difference_tensor(ing, bundle, conn);
  Tensor3 out(D.dim());
  for (std::size_t i = 0; i < D.dim(); ++i) {
    for (std::size_t j = 0; j < D.dim(); ++j) {
      for (std::size_t k = 0; k < D.dim(); ++k) out(i, j, k) = conn.gamma(i, j, k) + D(i, j, k);
    }
  }
  return out;
}

SecondFundamentalH normal_curvature_and_H(const HypersurfaceFrame& f, const Tensor3& gs,
                                          const SecondFundamentalV& mv) {
  const Matrix& B = f.chart.B;
  const std::size_t d = static_cast<std::size_t>(B.rows());
  const std::size_t m = static_cast<std::size_t>(B.cols());
  const Vector& Nd = f.normal.dn;
  const Vector& y = f.flag.y;

  // N_i Gamma*^i_jk, a d x d matrix in (j, k)
  Matrix NG = Matrix::Zero(ix(d), ix(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) NG(ix(j), ix(k)) += Nd[ix(i)] * gs(i, j, k);
    }
  }
  // N_i B^i_ab
  Matrix NB2 = Matrix::Zero(ix(m), ix(m));
  for (std::size_t i = 0; i < d; ++i) NB2 += Nd[ix(i)] * f.chart.B2[i];

  SecondFundamentalH r;
  // H_b = N_i (B^i_ab v^a + Gamma*^i_kj y^k B^j_b)
  r.H = NB2.transpose() * f.v + B.transpose() * NG.transpose() * y;
  r.H0 = r.H.dot(f.v);
  r.Hab = NB2 + B.transpose() * NG * B + mv.Mv * r.H.transpose();

  const Matrix skew = r.Hab - r.Hab.transpose();
  const Matrix expected = mv.Mv * r.H.transpose() - r.H * mv.Mv.transpose();
  r.sym_residual = (skew - expected).cwiseAbs().maxCoeff();
  r.h0_residual = (r.Hab.transpose() * f.v - r.H).cwiseAbs().maxCoeff();
  r.hb0_residual = (r.Hab * f.v - r.H - mv.Mv * r.H0).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace finsler
