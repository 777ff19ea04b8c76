#include "finsler/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace finsler {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

int classification_exponent(const SpaceSpec& spec) {
  switch (spec.family()) {
    case Family::GeneralizedSquare:
      return spec.exponent();
    case Family::Square:
      return 1;
    default:
      throw Error("hyperplane classification is implemented for the generalized-square family only, got " +
                  std::string(family_name(spec.family())));
  }
}

double scale_of(const Matrix& b_cov) { return 1.0 + b_cov.cwiseAbs().maxCoeff(); }

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

std::string_view third_kind_name(ThirdKind t) {
  switch (t) {
    case ThirdKind::Impossible: return "IMPOSSIBLE";
    case ThirdKind::Vacuous: return "VACUOUS";
    case ThirdKind::Possible: return "POSSIBLE";
  }
  return "?";
}

std::vector<SurfaceSample> sample_surface(const SpaceSpec& spec, const LevelSurface& surface,
                                          const ClassifyOptions& opts) {
  const std::size_t d = spec.dim();
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> coord(-opts.box, opts.box);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<SurfaceSample> out;
  std::size_t attempts = 0;
  while (out.size() < opts.points) {
    if (++attempts > 200 * (opts.points + 1)) throw Error("could not sample enough regular surface points");
    Vector x(ix(d));
    for (std::size_t i = 0; i < d; ++i) x[ix(i)] = coord(rng);
    const auto p = surface.project(x);
    if (!p) continue;
    SurfaceSample s;
    s.x = *p;
    try {
      const Chart chart = chart_at(surface, s.x);
      for (std::size_t n = 0; n < opts.directions; ++n) {
        Vector v(ix(d - 1));
        do {
          for (std::size_t a = 0; a + 1 < d; ++a) v[ix(a)] = normal(rng);
        } while (v.norm() < 1e-8);
        v.normalize();
        const FlagPoint f = tangential_flag(spec, chart, v);
        if (!validity_check(spec, f.x, f.y).ok()) throw DomainError("invalid tangential flag");
        s.directions.push_back(v);
      }
    } catch (const Error&) {
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

FirstKindResult first_kind_test(const SpaceSpec& spec, const std::vector<Vector>& points, double tol) {
  const std::size_t d = spec.dim();
  FirstKindResult r;
  r.pass = true;
  for (const Vector& x : points) {
    const ConnectionData conn = covariant_db(spec, x);
    const Vector b = spec.b_at(x);
    const std::size_t rows = d * (d + 1) / 2;
    Matrix A = Matrix::Zero(ix(rows), ix(d));
    Vector rhs(ix(rows));
    std::size_t row = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j, ++row) {
        A(ix(row), ix(j)) += b[ix(i)];
        A(ix(row), ix(i)) += b[ix(j)];
        rhs[ix(row)] = conn.b_cov(ix(i), ix(j)) + conn.b_cov(ix(j), ix(i));
      }
    }
    const LeastSquares ls = least_squares(A, rhs);
    const double threshold = tol * scale_of(conn.b_cov);
    r.c.push_back(ls.solution);
    r.residuals.push_back(ls.residual_norm);
    r.thresholds.push_back(threshold);
    r.max_residual = std::max(r.max_residual, ls.residual_norm);
    if (!(ls.residual_norm <= threshold)) r.pass = false;
  }
  return r;
}

SecondKindResult second_kind_test(const SpaceSpec& spec, const std::vector<Vector>& points, double tol) {
  SecondKindResult r;
  r.pass = true;
  for (const Vector& x : points) {
    const ConnectionData conn = covariant_db(spec, x);
    const Vector b = spec.b_at(x);
    const Matrix a = spec.a_at(x);
    const Vector b_up = a.llt().solve(b);
    const double b_sq = b.dot(b_up);
    const double e = b_sq > 0.0 ? b_up.dot(conn.b_cov * b_up) / (b_sq * b_sq) : 0.0;
    const double residual = (conn.b_cov - e * b * b.transpose()).cwiseAbs().maxCoeff();
    const double threshold = tol * scale_of(conn.b_cov);
    r.e.push_back(e);
    r.residuals.push_back(residual);
    r.thresholds.push_back(threshold);
    r.max_residual = std::max(r.max_residual, residual);
    if (!(residual <= threshold)) r.pass = false;
  }
  return r;
}

ThirdKindResult third_kind_test(const std::vector<HypersurfaceFrame>& frames,
                                const std::vector<SecondFundamentalV>& mv, double tol) {
  ThirdKindResult r;
  double max_b_sq = 0.0;
  double witness = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < frames.size(); ++n) {
    max_b_sq = std::max(max_b_sq, frames[n].bundle.b_sq);
    witness = std::min(witness, mv[n].M.cwiseAbs().maxCoeff());
  }
  r.witness = frames.empty() ? 0.0 : witness;
  if (max_b_sq == 0.0) {
    r.verdict = ThirdKind::Vacuous;
    r.note = "b vanishes on every sample; the space is Riemannian there";
  } else if (r.witness > tol) {
    r.verdict = ThirdKind::Impossible;
    r.note = "M_ab is nonzero at every sampled flag";
  } else {
    r.verdict = ThirdKind::Possible;
    r.note = "M_ab vanished at some flag although b^2 > 0";
  }
  return r;
}

ProportionalityResult proportionality_check(const SpaceSpec& spec, const std::vector<HypersurfaceFrame>& frames,
                                            const std::vector<SecondFundamentalH>& h,
                                            const std::vector<Vector>& c_per_frame) {
  const double k = classification_exponent(spec);
  ProportionalityResult r;
  r.applicable = true;
  for (std::size_t n = 0; n < frames.size(); ++n) {
    const HypersurfaceFrame& f = frames[n];
    const Matrix& hab = f.induced.h;
    const Matrix& Hab = h[n].Hab;
    const double b_sq = f.bundle.b_sq;
    const double c0 = c_per_frame[n].dot(f.flag.y);
    const double c_prime = std::sqrt(f.flag.b.dot(f.bundle.g_inv * f.flag.b));
    const double printed = c0 * std::sqrt(b_sq) / std::sqrt(1.0 + k * (k + 1.0));
    const double derived = -(k + 1.0) * c0 * c_prime / (4.0 * f.flag.alpha * (1.0 + k * (k + 1.0) * b_sq));
    const double hh = (hab.array() * hab.array()).sum();
    const double fitted = hh > 0.0 ? (Hab.array() * hab.array()).sum() / hh : 0.0;
    r.printed_factor.push_back(printed);
    r.derived_factor.push_back(derived);
    r.fitted_factor.push_back(fitted);
    r.max_dev_printed = std::max(r.max_dev_printed, (Hab - printed * hab).cwiseAbs().maxCoeff());
    r.max_dev_derived = std::max(r.max_dev_derived, (Hab - derived * hab).cwiseAbs().maxCoeff());
    r.max_dev_fitted = std::max(r.max_dev_fitted, (Hab - fitted * hab).cwiseAbs().maxCoeff());
  }
  return r;
}

ClassificationReport classify(const SpaceSpec& spec, const LevelSurface& surface, const ClassifyOptions& opts) {
  ClassificationReport rep;
  rep.exponent = classification_exponent(spec);
  rep.options = opts;
  rep.samples = sample_surface(spec, surface, opts);

  std::vector<Vector> points;
  for (const auto& s : rep.samples) points.push_back(s.x);
  rep.first = first_kind_test(spec, points, opts.tol);
  rep.second = second_kind_test(spec, points, opts.tol);

  std::vector<HypersurfaceFrame> frames;
  std::vector<SecondFundamentalV> mvs;
  std::vector<SecondFundamentalH> hs;
  std::vector<Vector> c_per_frame;
  GeometricRoute& geo = rep.geometric;
  geo.first = true;
  geo.second = true;
  double max_identity_ratio = 0.0;

  for (std::size_t p = 0; p < rep.samples.size(); ++p) {
    const SurfaceSample& s = rep.samples[p];
    const ConnectionData conn = covariant_db(spec, s.x);
    const double threshold = opts.tol * scale_of(conn.b_cov);
    double point_H = 0.0;
    double point_Hab = 0.0;
    double point_M = std::numeric_limits<double>::infinity();
    for (const Vector& v : s.directions) {
      HypersurfaceFrame f = build_frame(spec, surface, s.x, v);
      const SecondFundamentalV mv = second_fundamental_v(f);
      const DifferenceIngredients ing = difference_ingredients(f.bundle, conn, f.flag);
      const Tensor3 D = difference_tensor(ing, f.bundle, conn);
      Tensor3 gs(D.dim());
      for (std::size_t i = 0; i < D.dim(); ++i) {
        for (std::size_t j = 0; j < D.dim(); ++j) {
          for (std::size_t k = 0; k < D.dim(); ++k) gs(i, j, k) = conn.gamma(i, j, k) + D(i, j, k);
        }
      }
      const SecondFundamentalH h = normal_curvature_and_H(f, gs, mv);
      const Matrix b_bar = cartan_covariant_b(conn.b_cov, f.flag.b, D);
      const double c_prime = f.flag.b.dot(f.normal.up);

      const double sH = c_prime * h.H.cwiseAbs().maxCoeff();
      const double sHab = c_prime * h.Hab.cwiseAbs().maxCoeff();
      const Vector ident = c_prime * h.H + f.chart.B.transpose() * (b_bar.transpose() * f.flag.y);
      const double id_res = ident.cwiseAbs().maxCoeff();
      const double h0 = std::fabs(c_prime * h.H0 + f.flag.y.dot(b_bar * f.flag.y));
      geo.max_identity = std::max(geo.max_identity, id_res);
      geo.max_h0_b00 = std::max(geo.max_h0_b00, h0);
      max_identity_ratio = std::max(max_identity_ratio, std::max(id_res, h0) / scale_of(conn.b_cov));

      point_H = std::max(point_H, sH);
      point_Hab = std::max(point_Hab, sHab);
      point_M = std::min(point_M, mv.M.cwiseAbs().maxCoeff());

      frames.push_back(std::move(f));
      mvs.push_back(mv);
      hs.push_back(h);
      c_per_frame.push_back(rep.first.c[p]);
    }
    const bool g1 = point_H <= threshold;
    const bool g2 = g1 && point_Hab <= threshold;
    geo.first = geo.first && g1;
    geo.second = geo.second && g2;
    geo.max_H = std::max(geo.max_H, point_H);
    geo.max_Hab = std::max(geo.max_Hab, point_Hab);

    rep.rows.push_back({p, "first-kind", rep.first.residuals[p], pass_fail(rep.first.residuals[p] <= rep.first.thresholds[p])});
    rep.rows.push_back(
        {p, "second-kind", rep.second.residuals[p], pass_fail(rep.second.residuals[p] <= rep.second.thresholds[p])});
    rep.rows.push_back({p, "normal-curvature", point_H, pass_fail(g1)});
    rep.rows.push_back({p, "second-fundamental-h", point_Hab, pass_fail(g2)});
    rep.rows.push_back({p, "third-kind-witness", point_M, point_M > opts.tol ? "IMPOSSIBLE" : "POSSIBLE"});
  }

  rep.third = third_kind_test(frames, mvs, opts.tol);
  if (rep.first.pass) {
    rep.proportionality = proportionality_check(spec, frames, hs, c_per_frame);
  }

  rep.routes_agree = true;
  if (rep.first.pass != geo.first) {
    rep.routes_agree = false;
    rep.diagnostic += "first kind: algebraic and normal-curvature routes disagree; ";
  }
  if (rep.second.pass != geo.second) {
    rep.routes_agree = false;
    rep.diagnostic += "second kind: algebraic and h-tensor routes disagree; ";
  }
  if (max_identity_ratio > 1e-8) {
    rep.routes_agree = false;
    rep.diagnostic += "c' H_b + b_{i|j} y^i B^j_b does not vanish; ";
  }
  if (rep.second.pass && !rep.first.pass) {
    rep.routes_agree = false;
    rep.diagnostic += "second kind without first kind; ";
  }
  return rep;
}

}  // namespace finsler
