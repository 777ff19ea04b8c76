#include "finsler/geodesic.hpp"

#include <cmath>
#include <random>

namespace finsler {

namespace {

using Idx = Eigen::Index;

template <class T>
T segment_length(const SpaceSpec& spec, const std::vector<T>& a, const std::vector<T>& b) {
  const std::size_t d = spec.dim();
  std::vector<T> mid(d);
  std::vector<T> delta(d);
  for (std::size_t i = 0; i < d; ++i) {
    mid[i] = 0.5 * (a[i] + b[i]);
    delta[i] = b[i] - a[i];
  }
  return finsler_norm<T>(spec, std::span<const T>(mid), std::span<const T>(delta));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

double max_norm(const std::vector<Vector>& g) {
  double m = 0.0;
  for (const auto& v : g) m = std::max(m, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  return m;
}

}  // namespace

double polyline_length(const SpaceSpec& spec, const Polyline& poly) {
  if (poly.nodes.size() < 2) throw Error("a polyline needs at least two nodes");
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < poly.nodes.size(); ++s) {
    try {
      total += segment_length(spec, to_std(poly.nodes[s]), to_std(poly.nodes[s + 1]));
    } catch (const DomainError& e) {
      throw DomainError("segment " + std::to_string(s) + ": " + e.what());
    } catch (const DegenerateMetricError& e) {
      throw DomainError("segment " + std::to_string(s) + ": " + e.what());
    }
  }
  return total;
}

std::vector<Vector> polyline_gradient(const SpaceSpec& spec, const Polyline& poly) {
  using D = Dual<double>;
  const std::size_t d = spec.dim();
  const std::size_t n = poly.nodes.size();
  std::vector<Vector> grad(n, Vector::Zero(static_cast<Idx>(d)));
  auto lift = [&](const Vector& v) {
    std::vector<D> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = D(v[static_cast<Idx>(i)], 0.0);
    return out;
  };
  for (std::size_t node = 1; node + 1 < n; ++node) {
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<D> prev = lift(poly.nodes[node - 1]);
      std::vector<D> here = lift(poly.nodes[node]);
      std::vector<D> next = lift(poly.nodes[node + 1]);
      here[c].d = 1.0;
      const D l = segment_length(spec, prev, here) + segment_length(spec, here, next);
      grad[node][static_cast<Idx>(c)] = l.d;
    }
  }
  return grad;
}

Polyline initial_polyline(const Vector& p, const Vector& q, std::size_t m, std::uint64_t seed,
                          double perturbation) {
  if (m < 1) throw Error("a polyline needs at least one segment");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double amp = perturbation * (q - p).norm();
  Polyline poly;
  for (std::size_t i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(m);
    Vector x = p + t * (q - p);
    if (i > 0 && i < m) {
      for (Idx c = 0; c < x.size(); ++c) x[c] += amp * normal(rng);
    }
    poly.nodes.push_back(x);
  }
  return poly;
}

GeodesicResult minimize_length(const SpaceSpec& spec, Polyline start, const GeodesicOptions& opts) {
  GeodesicResult r;
  r.path = std::move(start);
  r.length = polyline_length(spec, r.path);
  std::vector<Vector> grad = polyline_gradient(spec, r.path);
  r.grad_norm = max_norm(grad);
  r.trace.push_back({0, r.length, r.grad_norm, 0.0});

  double step = 1e-2;
  std::vector<Vector> prev_x;
  std::vector<Vector> prev_g;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    if (r.grad_norm <= opts.tol) {
      r.converged = true;
      break;
    }
    // Barzilai-Borwein trial step, safeguarded by Armijo backtracking.
    if (!prev_x.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k) {
        const Vector s = r.path.nodes[k] - prev_x[k];
        ss += s.squaredNorm();
        sy += s.dot(grad[k] - prev_g[k]);
      }
      if (sy > 0.0) step = ss / sy;
    }
    double g2 = 0.0;
    for (const auto& g : grad) g2 += g.squaredNorm();

    Polyline trial = r.path;
    bool accepted = false;
    double trial_length = 0.0;
    std::vector<Vector> trial_grad;
    for (std::size_t bt = 0; bt < opts.max_backtracks; ++bt) {
      for (std::size_t k = 1; k + 1 < trial.nodes.size(); ++k) trial.nodes[k] = r.path.nodes[k] - step * grad[k];
      try {
        trial_length = polyline_length(spec, trial);
        if (trial_length <= r.length - opts.armijo * step * g2) {
          accepted = true;
          break;
        }
        // Near the minimum the length is flat to roundoff and Armijo cannot
        // see a decrease; accept a step that keeps the length and shrinks
        // the gradient (approximate Wolfe condition).
        if (trial_length <= r.length + 1e-14 * std::fabs(r.length)) {
          trial_grad = polyline_gradient(spec, trial);
          if (max_norm(trial_grad) < r.grad_norm) {
            accepted = true;
            break;
          }
          trial_grad.clear();
        }
      } catch (const DomainError&) {
      }
      step *= 0.5;
    }
    if (!accepted) {
      r.note = "line search failed to decrease the length";
      break;
    }
    prev_x = r.path.nodes;
    prev_g = grad;
    r.path = std::move(trial);
    r.length = trial_length;
    grad = trial_grad.empty() ? polyline_gradient(spec, r.path) : std::move(trial_grad);
    r.grad_norm = max_norm(grad);
    r.iterations = it;
    r.trace.push_back({it, r.length, r.grad_norm, step});
  }
  if (r.grad_norm <= opts.tol) r.converged = true;
  if (!r.converged && r.note.empty()) r.note = "iteration limit reached";
  return r;
}

GeodesicResult minimize_length(const SpaceSpec& spec, const Vector& p, const Vector& q, const GeodesicOptions& opts) {
  if ((q - p).cwiseAbs().maxCoeff() == 0.0) throw Error("geodesic endpoints coincide");
  return minimize_length(spec, initial_polyline(p, q, opts.segments, opts.seed, opts.perturbation), opts);
}

}  // namespace finsler
