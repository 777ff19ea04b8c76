#pragma once

// Pointwise Finsler tensors of an (alpha, beta)-metric, assembled from the
// closed-form coefficient formulas, and an audit that checks each formula
// against the differentiation oracles in numerics.hpp.

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/metric.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

struct AngularCoefficients {
  double p = 0.0;
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

struct MetricCoefficients {
  double p = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double dp0_dbeta = 0.0;
};

struct ReciprocalCoefficients {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double zeta = 0.0;
};

struct TensorBundle {
  PhiPartials phi;
  AngularCoefficients angular;
  MetricCoefficients metric;
  ReciprocalCoefficients reciprocal;

  double F = 0.0;
  Vector l;        // normalized element of support l_i
  Matrix g;        // fundamental tensor g_ij
  Matrix g_inv;    // reciprocal tensor g^ij
  Matrix h;        // angular metric tensor h_ij
  Tensor3 C;       // hv-torsion C_ijk
  double gamma1 = 0.0;
  Vector m;        // m_i = b_i - y_i beta / alpha^2

  Matrix a_inv;
  Vector b_up;     // b^i = a^ij b_j
  double b_sq = 0.0;
};

// p = F F_a / a, q0 = F F_bb, q1 = F F_ab / a, q2 = F (F_aa - F_a / a) / a^2.
AngularCoefficients angular_coefficients(const PhiPartials& pp, double alpha, double beta);

// p0 = q0 + F_b^2, p1 = q1 + p F_b / F, p2 = q2 + p^2 / F^2, plus dp0/dbeta
// in closed form for the family.
MetricCoefficients metric_coefficients(Family family, int k, const PhiPartials& pp,
                                       const AngularCoefficients& ac, double alpha, double beta);

double dp0_dbeta(Family family, int k, double alpha, double beta);

// S1 carries -(p0 p2 - p1^2) beta; the sign follows from inverting g by the
// Woodbury identity. Throws SingularCoefficientError when |zeta| < 1e-12.
ReciprocalCoefficients reciprocal_coefficients(const MetricCoefficients& mc, double alpha, double beta,
                                               double b_sq);

Matrix angular_tensor(const AngularCoefficients& ac, const Matrix& a, const Vector& b, const Vector& y_lower);
Matrix fundamental_tensor(const MetricCoefficients& mc, const Matrix& a, const Vector& b, const Vector& y_lower);
Matrix reciprocal_tensor(const ReciprocalCoefficients& rc, double p, const Matrix& a_inv, const Vector& b_up,
                         const Vector& y);
Tensor3 hv_torsion(const MetricCoefficients& mc, const Matrix& h, double gamma1, const Vector& m);

TensorBundle compute_bundle(const SpaceSpec& spec, const FlagPoint& flag);

// The q2 bracket of the generalized square metric as it is usually printed,
// k*beta*(k + 2*beta + k*beta) - alpha*(alpha + beta), and the bracket that
// follows from the defining expression, k(k+2) beta^2 + (k-1) alpha beta - alpha^2.
// Both are multiplied by (alpha+beta)^(2k) / alpha^(2k+4).
double q2_printed_expansion(int k, double alpha, double beta);
double q2_derived_expansion(int k, double alpha, double beta);

// p2 = beta (alpha+beta)^(2k) {2k^2 beta + 2k beta - k alpha - alpha} / alpha^(2k+4).
double p2_expansion(int k, double alpha, double beta);

// ---- audit ------------------------------------------------------------------

enum class AuditStatus { Pass, Fail, ExpectedFail, NotApplicable };

std::string_view audit_status_name(AuditStatus s);

struct AuditRow {
  std::string check;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  AuditStatus status = AuditStatus::Pass;
  std::string note;
};

struct AuditOptions {
  double dual_tolerance = 1e-7;
  double fd_tolerance = 1e-5;
  double identity_tolerance = 1e-8;
  // Richardson keeps the truncation error below tolerance near the domain
  // boundary of the Kropina families, where F has a pole at beta = 0.
  FiniteDifferenceOptions fd{1e-4, true};
};

struct AuditReport {
  std::vector<AuditRow> rows;
  std::size_t flags = 0;
  std::uint64_t seed = 0;

  // True unless some row has status Fail. ExpectedFail rows are informational.
  bool passed() const;
  std::size_t count(AuditStatus s) const;
};

// max |A - B| / max(1, max |B|)
double relative_error(const Matrix& a, const Matrix& b);
double relative_error(const Tensor3& a, const Tensor3& b);

AuditReport audit(const SpaceSpec& spec, const FlagPoint& flag, const AuditOptions& opts = {});

// Audits every flag and keeps, per row, the worst error seen.
AuditReport audit_sweep(const SpaceSpec& spec, const std::vector<FlagPoint>& flags, const AuditOptions& opts = {});

// x uniform in [-box, box]^d, y uniform on the unit sphere; flags failing
// validity_check or with a singular reciprocal coefficient are rejected and
// redrawn. Deterministic for a given seed.
std::vector<FlagPoint> sample_flags(const SpaceSpec& spec, std::size_t count, std::uint64_t seed, double box = 1.0);

}  // namespace finsler
