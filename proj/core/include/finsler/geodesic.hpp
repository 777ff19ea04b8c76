#pragma once

// Length-minimizing polylines between fixed endpoints. The length of a
// polyline is the sum of F(midpoint, segment) over its segments; positive
// homogeneity of F makes the parameter step cancel.

#include <cstdint>
#include <string>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

struct Polyline {
  std::vector<Vector> nodes;  // m + 1 nodes, endpoints fixed

  std::size_t segments() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

// Throws DomainError naming the first segment (0-based) whose flag is
// outside the metric's domain, including zero-length segments.
double polyline_length(const SpaceSpec& spec, const Polyline& poly);

// Gradient of the length with respect to each node (endpoints get zero rows).
std::vector<Vector> polyline_gradient(const SpaceSpec& spec, const Polyline& poly);

// Chord from p to q with m segments; interior nodes shifted by a seeded
// normal perturbation of size `perturbation * |q - p|`.
Polyline initial_polyline(const Vector& p, const Vector& q, std::size_t m, std::uint64_t seed,
                          double perturbation);

struct GeodesicOptions {
  std::size_t segments = 16;
  std::size_t max_iter = 20000;
  double tol = 1e-9;              // stop when max |gradient| <= tol
  std::uint64_t seed = 1;
  double perturbation = 0.05;
  double armijo = 1e-4;
  std::size_t max_backtracks = 60;
};

struct GeodesicTraceRow {
  std::size_t iteration = 0;
  double length = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct GeodesicResult {
  Polyline path;
  double length = 0.0;
  double grad_norm = 0.0;  // max-norm of the gradient at the returned path
  std::size_t iterations = 0;
  bool converged = false;
  std::string note;
  std::vector<GeodesicTraceRow> trace;
};

GeodesicResult minimize_length(const SpaceSpec& spec, Polyline start, const GeodesicOptions& opts = {});
GeodesicResult minimize_length(const SpaceSpec& spec, const Vector& p, const Vector& q,
                               const GeodesicOptions& opts = {});

}  // namespace finsler
