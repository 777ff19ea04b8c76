#pragma once

// Hyperplane classification of a level hypersurface in a generalized square
// Finsler space. Each kind is decided twice: algebraically from b_ij and
// geometrically from the second fundamental h-tensor, and the two must agree.

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/hypersurface.hpp"

namespace finsler {

struct ClassifyOptions {
  std::size_t points = 25;
  std::size_t directions = 5;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  double box = 1.0;  // sample box [-box, box]^d before projection
};

struct SurfaceSample {
  Vector x;
  std::vector<Vector> directions;  // unit (d-1)-vectors v
};

// Points drawn in the box and Newton-projected onto the surface; points where
// the chart or a tangential flag cannot be built are redrawn.
std::vector<SurfaceSample> sample_surface(const SpaceSpec& spec, const LevelSurface& surface,
                                          const ClassifyOptions& opts);

struct FirstKindResult {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<Vector> c;            // fitted c_j per point
  std::vector<double> residuals;    // ||A c - rhs||_2 per point
  std::vector<double> thresholds;   // tol (1 + max |b_ij|) per point
};

// Least squares for 2 b_ij = b_i c_j + b_j c_i over i <= j at each point.
FirstKindResult first_kind_test(const SpaceSpec& spec, const std::vector<Vector>& points, double tol);

struct SecondKindResult {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<double> e;            // e = b^i b^j b_ij / (b^2)^2
  std::vector<double> residuals;    // max |b_ij - e b_i b_j|
  std::vector<double> thresholds;
};

SecondKindResult second_kind_test(const SpaceSpec& spec, const std::vector<Vector>& points, double tol);

enum class ThirdKind { Impossible, Vacuous, Possible };
std::string_view third_kind_name(ThirdKind t);

struct ThirdKindResult {
  ThirdKind verdict = ThirdKind::Impossible;
  double witness = 0.0;  // min over flags of max |M_ab|
  std::string note;
};

ThirdKindResult third_kind_test(const std::vector<HypersurfaceFrame>& frames,
                                const std::vector<SecondFundamentalV>& mv, double tol);

// H_ab against c0 b / sqrt(1 + k(k+1)) h_ab as printed, against the factor
// that follows from the full difference tensor,
// -(k+1) c0 c' / (4 alpha (1 + k(k+1) b^2)), and against a fitted scalar.
struct ProportionalityResult {
  bool applicable = false;
  double max_dev_printed = 0.0;
  double max_dev_derived = 0.0;
  double max_dev_fitted = 0.0;
  std::vector<double> printed_factor;
  std::vector<double> derived_factor;
  std::vector<double> fitted_factor;
};

ProportionalityResult proportionality_check(const SpaceSpec& spec, const std::vector<HypersurfaceFrame>& frames,
                                            const std::vector<SecondFundamentalH>& h,
                                            const std::vector<Vector>& c_per_frame);

struct GeometricRoute {
  bool first = false;           // c' |H_a| small at every flag
  bool second = false;          // additionally c' |H_ab| small
  double max_H = 0.0;           // max over flags of c' max |H_a|
  double max_Hab = 0.0;         // max over flags of c' max |H_ab|
  double max_identity = 0.0;    // max |c' H_b + b_{i|j} y^i B^j_b|
  double max_h0_b00 = 0.0;      // max |c' H_0 + b_{i|j} y^i y^j|
};

struct ClassificationRow {
  std::size_t point = 0;
  std::string test;
  double residual = 0.0;
  std::string verdict;
};

struct ClassificationReport {
  FirstKindResult first;
  SecondKindResult second;
  ThirdKindResult third;
  ProportionalityResult proportionality;
  GeometricRoute geometric;
  bool routes_agree = false;
  std::string diagnostic;

  ClassifyOptions options;
  int exponent = 0;
  std::vector<SurfaceSample> samples;
  std::vector<ClassificationRow> rows;

  // Verdicts computed and both routes agree.
  bool consistent() const noexcept { return routes_agree; }
};

// Throws Error for families other than generalized-square / square.
ClassificationReport classify(const SpaceSpec& spec, const LevelSurface& surface, const ClassifyOptions& opts = {});

}  // namespace finsler
