#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "finsler/tensors.hpp"
#include "fixtures.hpp"

namespace finsler {
namespace {

using testing::euclidean;
using testing::parse_all;
using testing::vec;

Vector to_vector(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Matrix to_matrix(const nlohmann::json& j, std::size_t d) {
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d * d; ++i) m(static_cast<Eigen::Index>(i / d), static_cast<Eigen::Index>(i % d)) = j[i];
  return m;
}

Tensor3 to_tensor(const nlohmann::json& j, std::size_t d) {
  Tensor3 t(d);
  for (std::size_t i = 0; i < d * d * d; ++i) t(i / (d * d), (i / d) % d, i % d) = j[i];
  return t;
}

SpaceSpec space_from_case(const nlohmann::json& c) {
  const std::size_t d = c["b"].size();
  std::vector<std::string> a = c["a"], b = c["b"];
  return SpaceSpec(d, c["k"], parse_family(c["family"].get<std::string>()), parse_all(a), parse_all(b));
}

const nlohmann::json& oracle_cases() {
  static const nlohmann::json cases = [] {
    std::ifstream in(std::string(FINSLER_TEST_DATA_DIR) + "/oracle_values.json");
    return nlohmann::json::parse(in)["cases"];
  }();
  return cases;
}

TEST(FrozenOracle, ClosedFormsReproduceFrozenValues) {
  ASSERT_EQ(oracle_cases().size(), 18u);
  for (const auto& c : oracle_cases()) {
    const SpaceSpec spec = space_from_case(c);
    const std::size_t d = spec.dim();
    const FlagPoint flag = make_flag(spec, to_vector(c["x"]), to_vector(c["y"]));
    const TensorBundle t = compute_bundle(spec, flag);
    const std::string name = c["name"];
    EXPECT_NEAR(t.F, c["F"].get<double>(), 1e-12 * std::max(1.0, t.F)) << name;
    EXPECT_LT(relative_error(t.l, to_vector(c["l"])), 1e-12) << name;
    EXPECT_LT(relative_error(t.g, to_matrix(c["g"], d)), 1e-10) << name;
    EXPECT_LT(relative_error(t.C, to_tensor(c["C"], d)), 1e-9) << name;
  }
}

TEST(AngularCoefficients, UnitExponentAtBetaZero) {
  const AngularCoefficients c = angular_coefficients(phi_partials(Family::GeneralizedSquare, 1, 1, 0), 1, 0);
  EXPECT_DOUBLE_EQ(c.p, 1.0);
  EXPECT_DOUBLE_EQ(c.q0, 2.0);
  EXPECT_DOUBLE_EQ(c.q1, 0.0);
  EXPECT_DOUBLE_EQ(c.q2, -1.0);
}

TEST(AngularCoefficients, ExponentTwoAtBetaZero) {
  const AngularCoefficients c = angular_coefficients(phi_partials(Family::GeneralizedSquare, 2, 1, 0), 1, 0);
  EXPECT_DOUBLE_EQ(c.p, 1.0);
  EXPECT_DOUBLE_EQ(c.q0, 6.0);
}

TEST(AngularCoefficients, Q2ExpandedBracket) {
  const AngularCoefficients c = angular_coefficients(phi_partials(Family::GeneralizedSquare, 1, 1, 0.2), 1, 0.2);
  EXPECT_NEAR(c.q2, -1.2672, 1e-12);
  EXPECT_NEAR(q2_derived_expansion(1, 1, 0.2), -1.2672, 1e-12);
  EXPECT_EQ(q2_printed_expansion(1, 1, 0.2), q2_derived_expansion(1, 1, 0.2));
  const AngularCoefficients c2 = angular_coefficients(phi_partials(Family::GeneralizedSquare, 2, 1, 0.2), 1, 0.2);
  EXPECT_NEAR(q2_derived_expansion(2, 1, 0.2), c2.q2, 1e-12);
  EXPECT_GT(std::fabs(q2_printed_expansion(2, 1, 0.2) - c2.q2), 1e-1);
  EXPECT_GT(std::fabs(q2_printed_expansion(1, 2, 0.2) - q2_derived_expansion(1, 2, 0.2)), 1e-3);
}

TEST(AngularCoefficientsProperty, DerivedExpansionsMatchDefinitions) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> a(0.2, 3.0), r(-0.9, 2.0);
  for (int n = 0; n < 10000; ++n) {
    const int k = 1 + n % 3;
    const double al = a(rng), be = r(rng) * al;
    const PhiPartials pp = phi_partials(Family::GeneralizedSquare, k, al, be);
    const AngularCoefficients ac = angular_coefficients(pp, al, be);
    const MetricCoefficients mc = metric_coefficients(Family::GeneralizedSquare, k, pp, ac, al, be);
    EXPECT_NEAR(q2_derived_expansion(k, al, be), ac.q2, 1e-10 * std::max(1.0, std::fabs(ac.q2)));
    EXPECT_NEAR(p2_expansion(k, al, be), mc.p2, 1e-10 * std::max(1.0, std::fabs(mc.p2)));
    EXPECT_NEAR(mc.p0, ac.q0 + pp.F_b * pp.F_b, 1e-10 * std::max(1.0, std::fabs(mc.p0)));
    EXPECT_NEAR(mc.p1, ac.q1 + ac.p * pp.F_b / pp.F, 1e-10 * std::max(1.0, std::fabs(mc.p1)));
  }
}

TEST(MetricCoefficientsProperty, DerivativeOfP0MatchesDualNumbers) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> a(0.2, 3.0), r(-0.8, 0.8);
  const std::array<Family, 5> families{Family::GeneralizedSquare, Family::Square, Family::Kropina,
                                       Family::GeneralizedKropina, Family::Matsumoto};
  for (Family f : families) {
    for (int n = 0; n < 200; ++n) {
      const int k = 1 + n % 3;
      const double al = a(rng), be = r(rng) * al;
      if (family_domain_violation(f, al, be)) continue;
      auto p0 = [&](double b) {
        const PhiPartials pp = phi_partials(f, k, al, b);
        return pp.F * pp.F_bb + pp.F_b * pp.F_b;
      };
      const double h = 1e-6 * std::max(1.0, std::fabs(be));
      const double fd = (p0(be + h) - p0(be - h)) / (2 * h);
      const double exact = dp0_dbeta(f, k, al, be);
      EXPECT_NEAR(exact, fd, 1e-5 * std::max(1.0, std::fabs(exact))) << family_name(f);
    }
  }
}

void expect_beta_zero_values(int k, double alpha, double b_sq) {
  const PhiPartials pp = phi_partials(Family::GeneralizedSquare, k, alpha, 0.0);
  const AngularCoefficients ac = angular_coefficients(pp, alpha, 0.0);
  const MetricCoefficients mc = metric_coefficients(Family::GeneralizedSquare, k, pp, ac, alpha, 0.0);
  const ReciprocalCoefficients rc = reciprocal_coefficients(mc, alpha, 0.0, b_sq);
  const double n = k;
  EXPECT_NEAR(mc.p, 1.0, 1e-12);
  EXPECT_NEAR(mc.p0, (n + 1) * (2 * n + 1), 1e-12);
  EXPECT_NEAR(mc.p1, (n + 1) / alpha, 1e-12);
  EXPECT_NEAR(mc.p2, 0.0, 1e-12);
  EXPECT_NEAR(ac.q0, n * (n + 1), 1e-12);
  EXPECT_NEAR(ac.q1, 0.0, 1e-12);
  EXPECT_NEAR(ac.q2, -1.0 / (alpha * alpha), 1e-12);
  EXPECT_NEAR(rc.zeta, 1 + n * (n + 1) * b_sq, 1e-12);
  EXPECT_NEAR(rc.s0, n * (n + 1) / (1 + n * (n + 1) * b_sq), 1e-12);
  EXPECT_NEAR(mc.p * mc.dp0_dbeta - 3 * mc.p1 * ac.q0, n * (n * n - 1) / alpha, 1e-12);
}

TEST(BetaZero, Specializations) {
  for (int k = 1; k <= 3; ++k) {
    for (double alpha : {0.5, 1.0, 2.0}) expect_beta_zero_values(k, alpha, 0.01 * k);
  }
}

TEST(HvTorsion, Gamma1AtBetaZero) {
  for (int k : {1, 2}) {
    const auto spec = testing::fixture_space(testing::fixtures()[0], k);
    const TensorBundle t = compute_bundle(spec, make_flag(spec, vec({0, 0, 0}), vec({1, 0, 0})));
    EXPECT_NEAR(t.gamma1, k == 1 ? 0.0 : 6.0, 1e-12);
  }
}

TEST(FundamentalTensor, E1Matrix) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 1);
  const TensorBundle t = compute_bundle(spec, make_flag(spec, vec({0, 0, 0}), vec({1, 0, 0})));
  Matrix expected(3, 3);
  expected << 1, 0, 0.2, 0, 1, 0, 0.2, 0, 1.06;
  EXPECT_LT((t.g - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((t.g_inv * t.g - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((t.h * vec({1, 0, 0})).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FundamentalTensor, ExponentTwoAtBetaZero) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 2);
  const Vector y = vec({0.6, -0.8, 0});
  const FlagPoint f = make_flag(spec, vec({0.1, 0.2, 0}), y);
  const TensorBundle t = compute_bundle(spec, f);
  const Matrix expected = f.a + 15.0 * f.b * f.b.transpose() +
                          3.0 * (f.b * f.y_lower.transpose() + f.y_lower * f.b.transpose()) / f.alpha;
  EXPECT_LT((t.g - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(FundamentalTensor, VanishingOneFormGivesRiemannian) {
  const SpaceSpec spec(3, 2, Family::GeneralizedSquare, testing::curved_metric(), parse_all({"0", "0", "0"}));
  const FlagPoint f = make_flag(spec, vec({0.3, -0.4, 0.5}), vec({0.6, 0.2, 0.7}));
  const TensorBundle t = compute_bundle(spec, f);
  EXPECT_LT((t.g - f.a).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((t.g_inv - f.a.inverse()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(AngularTensor, BetaZeroForm) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 3);
  const FlagPoint f = make_flag(spec, vec({0, 0, 0}), vec({0.3, 0.4, 0}));
  const TensorBundle t = compute_bundle(spec, f);
  const Matrix expected = f.a + 12.0 * f.b * f.b.transpose() - f.y_lower * f.y_lower.transpose() / (f.alpha * f.alpha);
  EXPECT_LT((t.h - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(AngularTensor, RiemannianFamily) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 1, Family::Riemannian);
  const Vector y = vec({0.6, 0, 0.8});
  const TensorBundle t = compute_bundle(spec, make_flag(spec, vec({0, 0, 0}), y));
  EXPECT_LT((t.h - (Matrix::Identity(3, 3) - y * y.transpose())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(t.C.max_abs(), 0.0);
}

TEST(ReciprocalTensor, ContractedOneFormAtBetaZero) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 1);
  const FlagPoint f = make_flag(spec, vec({0, 0, 0}), vec({1, 0, 0}));
  const TensorBundle t = compute_bundle(spec, f);
  const double b_sq = 0.01;
  EXPECT_NEAR(f.b.dot(t.g_inv * f.b), b_sq / (1 + 2 * b_sq), 1e-15);
  EXPECT_NEAR(f.b.dot(t.g.inverse() * f.b), b_sq / (1 + 2 * b_sq), 1e-15);
}

TEST(ReciprocalTensor, FlippedS1SignIsNotAnInverse) {
  const SpaceSpec spec(3, 2, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  const FlagPoint f = make_flag(spec, vec({0.3, -0.4, 0.5}), vec({0.6, 0.2, 0.7}));
  const TensorBundle t = compute_bundle(spec, f);
  ReciprocalCoefficients flipped = t.reciprocal;
  const double det = t.metric.p0 * t.metric.p2 - t.metric.p1 * t.metric.p1;
  flipped.s1 = (t.metric.p * t.metric.p1 + det * f.beta) / (t.metric.p * t.reciprocal.zeta);
  const Matrix wrong = reciprocal_tensor(flipped, t.metric.p, t.a_inv, t.b_up, f.y);
  EXPECT_LT((t.g * t.g_inv - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT((t.g * wrong - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(ReciprocalTensor, VanishingZetaIsSingular) {
  MetricCoefficients mc;
  EXPECT_THROW(reciprocal_coefficients(mc, 1.0, 0.0, 0.0), SingularCoefficientError);
}

std::vector<FlagPoint> curved_sweep(int k, std::size_t count, std::uint64_t seed) {
  const SpaceSpec spec(3, k, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  return sample_flags(spec, count, seed);
}

TEST(TensorBundleProperty, StructuralIdentities) {
  for (int k = 1; k <= 3; ++k) {
    const SpaceSpec spec(3, k, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
    for (const FlagPoint& f : sample_flags(spec, 200, 31 + static_cast<std::uint64_t>(k))) {
      const TensorBundle t = compute_bundle(spec, f);
      EXPECT_NEAR(f.y.dot(t.g * f.y), t.F * t.F, 1e-10 * t.F * t.F);
      EXPECT_LT((t.l - t.g * f.y / t.F).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((t.h * f.y).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LT(t.C.contract_last(f.y).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LT((t.g - t.g.transpose()).cwiseAbs().maxCoeff(), 1e-10);
      double asym = 0.0;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          for (std::size_t l = 0; l < 3; ++l)
            asym = std::max({asym, std::fabs(t.C(i, j, l) - t.C(j, i, l)), std::fabs(t.C(i, j, l) - t.C(l, j, i))});
      EXPECT_LT(asym, 1e-10 * std::max(1.0, t.C.max_abs()));
    }
  }
}

TEST(TensorBundleProperty, HomogeneityDegreesInDirection) {
  const SpaceSpec spec(3, 2, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  for (const FlagPoint& f : curved_sweep(2, 100, 41)) {
    const TensorBundle t = compute_bundle(spec, f);
    for (double lambda : {0.5, 2.0}) {
      const TensorBundle s = compute_bundle(spec, make_flag(spec, f.x, lambda * f.y));
      EXPECT_LT(relative_error(s.g, t.g), 1e-10);
      EXPECT_LT(relative_error(s.l, t.l), 1e-10);
      Tensor3 scaled = t.C;
      for (std::size_t i = 0; i < 27; ++i) scaled(i / 9, (i / 3) % 3, i % 3) /= lambda;
      EXPECT_LT(relative_error(s.C, scaled), 1e-10);
    }
  }
}

TEST(Audit, E1AllPassExceptPrintedExpansion) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 1);
  const AuditReport r = audit(spec, make_flag(spec, vec({0.2, 0.1, 0.3}), vec({0.6, 0.3, 0.74})));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.count(AuditStatus::Fail), 0u);
  EXPECT_EQ(r.count(AuditStatus::ExpectedFail), 1u);
  for (const AuditRow& row : r.rows) {
    if (row.status == AuditStatus::ExpectedFail) EXPECT_NE(row.check.find("printed"), std::string::npos);
  }
}

TEST(Audit, RiemannianPassesTrivially) {
  const auto spec = testing::fixture_space(testing::fixtures()[0], 1, Family::Riemannian);
  const AuditReport r = audit(spec, make_flag(spec, vec({0, 0, 0}), vec({0.3, 0.4, 0.5})));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.count(AuditStatus::ExpectedFail), 0u);
}

TEST(Audit, ExponentThreeSweepWithinTolerance) {
  const SpaceSpec spec(3, 3, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  const AuditReport r = audit_sweep(spec, sample_flags(spec, 100, 5));
  EXPECT_EQ(r.count(AuditStatus::Fail), 0u);
  EXPECT_LT(r.rows.front().max_rel_error, 1e-7);
}

TEST(Audit, OtherFamiliesHaveNoDiscrepancy) {
  const SpaceSpec base(3, 2, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  for (Family f : {Family::Randers, Family::Kropina, Family::GeneralizedKropina, Family::Matsumoto}) {
    const SpaceSpec spec = base.with_family(f, 2);
    const AuditReport r = audit_sweep(spec, sample_flags(spec, 50, 6));
    EXPECT_EQ(r.count(AuditStatus::Fail), 0u) << family_name(f);
    EXPECT_EQ(r.count(AuditStatus::ExpectedFail), 0u) << family_name(f);
  }
}

TEST(SampleFlags, DeterministicForSeed) {
  const SpaceSpec spec(3, 1, Family::GeneralizedSquare, testing::curved_metric(), testing::curved_one_form());
  const auto a = sample_flags(spec, 20, 99);
  const auto b = sample_flags(spec, 20, 99);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
}

}  // namespace
}  // namespace finsler
