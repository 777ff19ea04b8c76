#include "finsler/tensors.hpp"

#include <cmath>

namespace finsler {

AngularCoefficients angular_coefficients(const PhiPartials& pp, double alpha, double /*beta*/) {
  AngularCoefficients c;
  c.p = pp.F * pp.F_a / alpha;
  c.q0 = pp.F * pp.F_bb;
  c.q1 = pp.F * pp.F_ab / alpha;
  c.q2 = pp.F * (pp.F_aa - pp.F_a / alpha) / (alpha * alpha);
  return c;
}

double dp0_dbeta(Family family, int k, double alpha, double beta) {
  const double a = alpha;
  const double b = beta;
  switch (family) {
    case Family::GeneralizedSquare: {
      const double n = k;
      return 2.0 * n * (n + 1.0) * (2.0 * n + 1.0) * std::pow(a + b, 2.0 * n - 1.0) / std::pow(a, 2.0 * n);
    }
    case Family::Square:
      return dp0_dbeta(Family::GeneralizedSquare, 1, alpha, beta);
    case Family::Randers:
    case Family::Riemannian:
      return 0.0;
    case Family::Kropina:
      return -12.0 * std::pow(a, 4) / std::pow(b, 5);
    case Family::GeneralizedKropina: {
      const double n = k;
      return -2.0 * n * (n + 1.0) * (2.0 * n + 1.0) * std::pow(a, 2.0 * n + 2.0) / std::pow(b, 2.0 * n + 3.0);
    }
    case Family::Matsumoto:
      return 12.0 * std::pow(a, 4) / std::pow(a - b, 5);
  }
  throw DomainError("unknown metric family");
}

MetricCoefficients metric_coefficients(Family family, int k, const PhiPartials& pp,
                                       const AngularCoefficients& ac, double alpha, double beta) {
  MetricCoefficients c;
  c.p = ac.p;
  c.p0 = ac.q0 + pp.F_b * pp.F_b;
  c.p1 = ac.q1 + ac.p * pp.F_b / pp.F;
  c.p2 = ac.q2 + ac.p * ac.p / (pp.F * pp.F);
  c.dp0_dbeta = dp0_dbeta(family, k, alpha, beta);
  return c;
}

ReciprocalCoefficients reciprocal_coefficients(const MetricCoefficients& mc, double alpha, double beta,
                                               double b_sq) {
  const double det = mc.p0 * mc.p2 - mc.p1 * mc.p1;
  ReciprocalCoefficients r;
  r.zeta = mc.p * (mc.p + mc.p0 * b_sq + mc.p1 * beta) + det * (alpha * alpha * b_sq - beta * beta);
  if (std::fabs(r.zeta) < 1e-12) throw SingularCoefficientError("reciprocal coefficient zeta vanishes");
  const double denom = mc.p * r.zeta;
  r.s0 = (mc.p * mc.p0 + det * alpha * alpha) / denom;
  r.s1 = (mc.p * mc.p1 - det * beta) / denom;
  r.s2 = (mc.p * mc.p2 + det * b_sq) / denom;
  return r;
}

Matrix angular_tensor(const AngularCoefficients& ac, const Matrix& a, const Vector& b, const Vector& y_lower) {
  return ac.p * a + ac.q0 * b * b.transpose() + ac.q1 * (b * y_lower.transpose() + y_lower * b.transpose()) +
         ac.q2 * y_lower * y_lower.transpose();
}

Matrix fundamental_tensor(const MetricCoefficients& mc, const Matrix& a, const Vector& b, const Vector& y_lower) {
  return mc.p * a + mc.p0 * b * b.transpose() + mc.p1 * (b * y_lower.transpose() + y_lower * b.transpose()) +
         mc.p2 * y_lower * y_lower.transpose();
}

Matrix reciprocal_tensor(const ReciprocalCoefficients& rc, double p, const Matrix& a_inv, const Vector& b_up,
                         const Vector& y) {
  return a_inv / p - rc.s0 * b_up * b_up.transpose() - rc.s1 * (b_up * y.transpose() + y * b_up.transpose()) -
         rc.s2 * y * y.transpose();
}

Tensor3 hv_torsion(const MetricCoefficients& mc, const Matrix& h, double gamma1, const Vector& m) {
  const auto d = static_cast<std::size_t>(h.rows());
  Tensor3 c(d);
  const double scale = 1.0 / (2.0 * mc.p);
  for (std::size_t i = 0; i < d; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      for (std::size_t k = 0; k < d; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        c(i, j, k) = scale * (mc.p1 * (h(ii, jj) * m[kk] + h(jj, kk) * m[ii] + h(kk, ii) * m[jj]) +
                              gamma1 * m[ii] * m[jj] * m[kk]);
      }
    }
  }
  return c;
}

TensorBundle compute_bundle(const SpaceSpec& spec, const FlagPoint& flag) {
  TensorBundle t;
  const double alpha = flag.alpha;
  const double beta = flag.beta;
  t.phi = phi_partials(spec.family(), spec.exponent(), alpha, beta);
  t.angular = angular_coefficients(t.phi, alpha, beta);
  t.metric = metric_coefficients(spec.family(), spec.exponent(), t.phi, t.angular, alpha, beta);

  t.a_inv = flag.a.llt().solve(Matrix::Identity(flag.a.rows(), flag.a.cols()));
  t.b_up = t.a_inv * flag.b;
  t.b_sq = flag.b.dot(t.b_up);
  t.reciprocal = reciprocal_coefficients(t.metric, alpha, beta, t.b_sq);

  t.F = t.phi.F;
  t.l = t.phi.F_a * flag.y_lower / alpha + t.phi.F_b * flag.b;
  t.h = angular_tensor(t.angular, flag.a, flag.b, flag.y_lower);
  t.g = fundamental_tensor(t.metric, flag.a, flag.b, flag.y_lower);
  t.g_inv = reciprocal_tensor(t.reciprocal, t.metric.p, t.a_inv, t.b_up, flag.y);

  t.m = flag.b - flag.y_lower * (beta / (alpha * alpha));
  t.gamma1 = t.metric.p * t.metric.dp0_dbeta - 3.0 * t.metric.p1 * t.angular.q0;
  t.C = hv_torsion(t.metric, t.h, t.gamma1, t.m);
  return t;
}

double q2_printed_expansion(int k, double alpha, double beta) {
  const double n = k;
  const double bracket = n * beta * (n + 2.0 * beta + n * beta) - alpha * (alpha + beta);
  return std::pow(alpha + beta, 2.0 * n) * bracket / std::pow(alpha, 2.0 * n + 4.0);
}

double q2_derived_expansion(int k, double alpha, double beta) {
  const double n = k;
  const double bracket = n * (n + 2.0) * beta * beta + (n - 1.0) * alpha * beta - alpha * alpha;
  return std::pow(alpha + beta, 2.0 * n) * bracket / std::pow(alpha, 2.0 * n + 4.0);
}

double p2_expansion(int k, double alpha, double beta) {
  const double n = k;
  const double bracket = 2.0 * n * n * beta + 2.0 * n * beta - n * alpha - alpha;
  return beta * std::pow(alpha + beta, 2.0 * n) * bracket / std::pow(alpha, 2.0 * n + 4.0);
}

ValidityReport validity_check(const SpaceSpec& spec, const Vector& x, const Vector& y) {
  const FlagPoint flag = make_flag(spec, x, y);
  ValidityReport r;
  r.alpha_positive = flag.alpha > 0.0;
  if (auto why = family_domain_violation(spec.family(), flag.alpha, flag.beta)) {
    r.note = *why;
    return r;
  }
  r.family_domain = true;
  const double F = phi_value(spec.family(), spec.exponent(), flag.alpha, flag.beta);
  r.f_positive = F > 0.0;
  if (!r.f_positive) {
    r.note = "F is not positive";
    return r;
  }
  const PhiPartials pp = phi_partials(spec.family(), spec.exponent(), flag.alpha, flag.beta);
  const AngularCoefficients ac = angular_coefficients(pp, flag.alpha, flag.beta);
  const MetricCoefficients mc = metric_coefficients(spec.family(), spec.exponent(), pp, ac, flag.alpha, flag.beta);
  const Matrix g = fundamental_tensor(mc, flag.a, flag.b, flag.y_lower);
  const PdCheck pd = pd_check(0.5 * (g + g.transpose()));
  r.g_positive_definite = pd.positive_definite;
  r.pivot = pd.pivot;
  if (!pd.positive_definite) r.note = "fundamental tensor fails factorization at pivot " + std::to_string(pd.pivot);
  return r;
}

}  // namespace finsler
