// Writes oracle-only reference values to JSON. Nothing here touches the
// closed-form tensor formulas: g and C come from dual derivatives of F^2,
// the Cartan coefficients from the spray, and the Christoffel symbols from
// dual derivatives of the a_ij expressions.

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cartan_oracle.hpp"
#include "fixtures.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

json to_json(const Tensor3& t) { return json(std::vector<double>(t.data().begin(), t.data().end())); }

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

Tensor3 christoffel_by_duals(const SpaceSpec& spec, const Vector& x) {
  const std::size_t d = spec.dim();
  Tensor3 da(d);  // (i, j, l) = d_l a_ij
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Vector grad = dual_gradient([&](auto xs) { return spec.a(i, j).eval(xs); }, x);
      for (std::size_t l = 0; l < d; ++l) da(i, j, l) = grad[static_cast<Eigen::Index>(l)];
    }
  }
  const Matrix a_inv = spec.a_at(x).inverse();
  Tensor3 gamma(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
          s += 0.5 * a_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) *
               (da(l, k, j) + da(j, l, k) - da(j, k, l));
        }
        gamma(i, j, k) = s;
      }
    }
  }
  return gamma;
}

json record(const std::string& name, const std::vector<std::string>& a, const std::vector<std::string>& b,
            Family family, int k, const Vector& x, const Vector& y) {
  const SpaceSpec spec(3, k, family, testing::parse_all(a), testing::parse_all(b));
  const FlagPoint flag = make_flag(spec, x, y);
  auto norm = [&](auto ys) { return finsler_norm(family, k, flag.a, flag.b, ys); };
  auto norm_sq = [&](auto ys) {
    auto f = finsler_norm(family, k, flag.a, flag.b, ys);
    return f * f;
  };
  const SecondOrderJet jet = jet_eval(norm_sq, y);
  Tensor3 c = third_derivatives(norm_sq, y);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t m = 0; m < 3; ++m) c(i, j, m) *= 0.25;
    }
  }
  const auto cartan = testing::cartan_oracle(spec, x, y);

  json out;
  out["name"] = name;
  out["family"] = std::string(family_name(family));
  out["k"] = k;
  out["a"] = a;
  out["b"] = b;
  out["x"] = to_json(x);
  out["y"] = to_json(y);
  out["F"] = std::sqrt(jet.value);
  out["l"] = to_json(dual_gradient(norm, y));
  out["g"] = to_json(Matrix(0.5 * jet.hessian));
  out["C"] = to_json(c);
  out["christoffel"] = to_json(christoffel_by_duals(spec, x));
  out["gamma_star"] = to_json(cartan.gamma_h);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: freeze_oracles <out.json>\n";
    return 2;
  }
  const std::vector<std::string> flat{"1", "0", "0", "0", "1", "0", "0", "0", "1"};
  const std::vector<std::string> curved{"1 + 0.2*x2^2", "0.1*x1*x3", "0", "0.1*x1*x3", "1.5 + 0.1*sin(x1)",
                                        "0.05*x2", "0", "0.05*x2", "1 + 0.1*x1^2"};
  const std::vector<std::string> b_const{"0", "0", "0.1"};
  const std::vector<std::string> b_exp{"0", "0", "exp(x3)"};
  const std::vector<std::string> b_curved{"0.1*x2 + 0.05", "0.2*x3*x1 - 0.1", "0.15 + 0.1*x1^2"};
  const Vector x_e1 = testing::vec({0.2, -0.1, 0.0});
  const Vector x_c = testing::vec({0.3, -0.4, 0.5});
  const Vector y_c = testing::vec({0.6, 0.2, 0.7});

  json cases = json::array();
  for (int k = 1; k <= 3; ++k) {
    cases.push_back(record("E1-k" + std::to_string(k) + "-tangent", flat, b_const, Family::GeneralizedSquare, k, x_e1,
                           testing::vec({1, 0, 0})));
    cases.push_back(record("E1-k" + std::to_string(k) + "-tilted", flat, b_const, Family::GeneralizedSquare, k, x_e1,
                           testing::vec({0.6, 0.3, 0.5})));
    cases.push_back(record("E2-k" + std::to_string(k) + "-offsurface", flat, b_exp, Family::GeneralizedSquare, k,
                           testing::vec({0.1, 0.2, -0.3}), testing::vec({0.3, -0.5, 0.4})));
    cases.push_back(record("curved-generalized-square-k" + std::to_string(k), curved, b_curved,
                           Family::GeneralizedSquare, k, x_c, y_c));
  }
  cases.push_back(record("curved-square", curved, b_curved, Family::Square, 1, x_c, y_c));
  cases.push_back(record("curved-randers", curved, b_curved, Family::Randers, 1, x_c, y_c));
  cases.push_back(record("curved-kropina", curved, b_curved, Family::Kropina, 1, x_c, y_c));
  cases.push_back(record("curved-generalized-kropina-k2", curved, b_curved, Family::GeneralizedKropina, 2, x_c, y_c));
  cases.push_back(record("curved-matsumoto", curved, b_curved, Family::Matsumoto, 1, x_c, y_c));
  cases.push_back(record("curved-riemannian", curved, b_curved, Family::Riemannian, 1, x_c, y_c));

  json doc;
  doc["description"] = "oracle-only reference values: g = 1/2 Hess F^2 (hyper-dual), C = 1/4 d3 F^2 (nested dual), "
                       "Cartan coefficients from the spray, Christoffel symbols from dual derivatives of a_ij";
  doc["cases"] = cases;
  std::ofstream(argv[1]) << std::setprecision(17) << doc.dump(1) << "\n";
  return 0;
}
