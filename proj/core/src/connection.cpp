#include "finsler/connection.hpp"

#include <array>

namespace finsler {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

}  // namespace

Tensor3 christoffel(const SpaceSpec& spec, const Vector& x) {
  const std::size_t d = spec.dim();
  const Matrix a = spec.a_at(x);
  const Matrix a_inv = a.llt().solve(Matrix::Identity(a.rows(), a.cols()));
  const Tensor3 da = spec.da_at(x);

  // first kind: [jk, l] = 1/2 (d_j a_lk + d_k a_jl - d_l a_jk)
  Tensor3 first(d);
  for (std::size_t l = 0; l < d; ++l) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j; k < d; ++k) {
        const double v = 0.5 * (da(l, k, j) + da(j, l, k) - da(j, k, l));
        first(l, j, k) = v;
        first(l, k, j) = v;
      }
    }
  }
  Tensor3 gamma(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j; k < d; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < d; ++l) s += a_inv(ix(i), ix(l)) * first(l, j, k);
        gamma(i, j, k) = s;
        gamma(i, k, j) = s;
      }
    }
  }
  return gamma;
}

ConnectionData covariant_db(const SpaceSpec& spec, const Vector& x) {
  const std::size_t d = spec.dim();
  ConnectionData c;
  c.gamma = christoffel(spec, x);
  const Vector b = spec.b_at(x);
  const Matrix db = spec.db_at(x);
  c.b_cov = Matrix(ix(d), ix(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = db(ix(i), ix(j));
      for (std::size_t l = 0; l < d; ++l) s -= b[ix(l)] * c.gamma(l, i, j);
      c.b_cov(ix(i), ix(j)) = s;
    }
  }
  c.E = 0.5 * (c.b_cov + c.b_cov.transpose());
  c.F = 0.5 * (c.b_cov - c.b_cov.transpose());
  return c;
}

DifferenceIngredients difference_ingredients(const TensorBundle& t, const ConnectionData& conn,
                                             const FlagPoint& flag) {
  const MetricCoefficients& mc = t.metric;
  const Vector& y = flag.y;
  DifferenceIngredients r;
  r.B_low = mc.p0 * flag.b + mc.p1 * flag.y_lower;
  r.B_up = t.g_inv * r.B_low;
  const double a2 = flag.alpha * flag.alpha;
  r.B_mat = 0.5 * (mc.p1 * (flag.a - flag.y_lower * flag.y_lower.transpose() / a2) +
                   mc.dp0_dbeta * t.m * t.m.transpose());
  r.B_mixed = t.g_inv * r.B_mat.transpose();
  r.F_mixed = t.g_inv * conn.F;
  r.B0 = r.B_low.dot(y);
  r.E00 = y.dot(conn.E * y);
  r.b0 = conn.b_cov.transpose() * y;

  const Vector E_k0 = conn.E * y;
  const Vector F_m0 = r.F_mixed * y;
  r.A = r.B_mixed * r.E00 + r.B_up * E_k0.transpose() + F_m0 * r.B_low.transpose() + r.B0 * r.F_mixed;
  r.lambda = r.B_up * r.E00 + 2.0 * r.B0 * F_m0;
  return r;
}

Tensor3 raise_first(const Tensor3& c, const Matrix& g_inv) {
  const std::size_t d = c.dim();
  Tensor3 out(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < d; ++l) s += g_inv(ix(i), ix(l)) * c(l, j, k);
        out(i, j, k) = s;
      }
    }
  }
  return out;
}

Tensor3 difference_tensor(const DifferenceIngredients& ing, const TensorBundle& t, const ConnectionData& conn,
                          SummationOrder order) {
  const std::size_t d = t.C.dim();
  const Tensor3 Cu = raise_first(t.C, t.g_inv);
  const Matrix& g_inv = t.g_inv;

  // b_0m g^im, C_jkm A^m_s g^is contracted over s first
  const Vector b0_up = g_inv * ing.b0;
  const Matrix Ag = ing.A * g_inv;  // (m, i) = A^m_s g^si

  Tensor3 D(d);
  std::array<double, 10> terms{};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        const Idx I = ix(i), J = ix(j), K = ix(k);
        double ca = 0.0, cb = 0.0, cc = 0.0, lam = 0.0;
        for (std::size_t m = 0; m < d; ++m) {
          const Idx M = ix(m);
          ca += Cu(i, j, m) * ing.A(M, K);
          cb += Cu(i, k, m) * ing.A(M, J);
          cc += t.C(j, k, m) * Ag(M, I);
          for (std::size_t s = 0; s < d; ++s) {
            lam += ing.lambda[ix(s)] *
                   (Cu(i, j, m) * Cu(m, s, k) + Cu(i, k, m) * Cu(m, s, j) - Cu(m, j, k) * Cu(i, m, s));
          }
        }
        terms = {ing.B_up[I] * conn.E(J, K),
                 ing.F_mixed(I, K) * ing.B_low[J],
                 ing.F_mixed(I, J) * ing.B_low[K],
                 ing.B_mixed(I, J) * ing.b0[K],
                 ing.B_mixed(I, K) * ing.b0[J],
                 -b0_up[I] * ing.B_mat(J, K),
                 -ca,
                 -cb,
                 cc,
                 lam};
        double sum = 0.0;
        if (order == SummationOrder::Printed) {
          for (double v : terms) sum += v;
        } else {
          for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
        }
        D(i, j, k) = sum;
      }
    }
  }
  return D;
}

Tensor3 difference_tensor(const SpaceSpec& spec, const FlagPoint& flag) {
  const TensorBundle t = compute_bundle(spec, flag);
  const ConnectionData conn = covariant_db(spec, flag.x);
  const DifferenceIngredients ing = difference_ingredients(t, conn, flag);
  return difference_tensor(ing, t, conn);
}

Matrix cartan_covariant_b(const Matrix& b_cov, const Vector& b, const Tensor3& D) {
  const std::size_t d = D.dim();
  Matrix out = b_cov;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < d; ++r) s += b[ix(r)] * D(r, i, j);
      out(ix(i), ix(j)) -= s;
    }
  }
  return out;
}

}  // namespace finsler
