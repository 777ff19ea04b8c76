#pragma once

#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/hypersurface.hpp"
#include "finsler/metric.hpp"

namespace finsler::testing {

inline std::vector<Expr> euclidean(std::size_t d) {
  std::vector<Expr> a;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a.push_back(Expr::number(i == j ? 1.0 : 0.0));
  }
  return a;
}

inline std::vector<Expr> parse_all(const std::vector<std::string>& texts) {
  std::vector<Expr> out;
  for (const auto& t : texts) out.push_back(parse(t));
  return out;
}

// A non-flat, non-diagonal metric used wherever curvature must not vanish.
inline std::vector<Expr> curved_metric() {
  return parse_all({"1 + 0.2*x2^2", "0.1*x1*x3", "0", "0.1*x1*x3", "1.5 + 0.1*sin(x1)", "0.05*x2", "0", "0.05*x2",
                    "1 + 0.1*x1^2"});
}

// b that is not a gradient, positive beta at the standard curved flag
inline std::vector<Expr> curved_one_form() { return parse_all({"0.1*x2 + 0.05", "0.2*x3*x1 - 0.1", "0.15 + 0.1*x1^2"}); }

struct Fixture {
  std::string name;
  std::string potential;
  double level;
  double b_norm;  // |b| on the surface
};

inline const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> all{
      {"E1", "0.1*x3", 0.0, 0.1},
      {"E2", "exp(x3)", 1.0, 1.0},
      {"E3", "(x1^2 + x2^2 + x3^2)/2", 0.5, 1.0},
  };
  return all;
}

inline SpaceSpec fixture_space(const Fixture& f, int k, Family family = Family::GeneralizedSquare) {
  return SpaceSpec::from_potential(3, k, family, euclidean(3), parse(f.potential));
}

inline LevelSurface fixture_surface(const Fixture& f) { return LevelSurface(parse(f.potential), f.level, 3); }

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace finsler::testing
