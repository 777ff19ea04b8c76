#include "finsler/metric.hpp"

#include <array>
#include <cmath>

namespace finsler {

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyName, 7> kFamilies{{
    {Family::GeneralizedSquare, "generalized-square"},
    {Family::Square, "square"},
    {Family::Randers, "randers"},
    {Family::Kropina, "kropina"},
    {Family::GeneralizedKropina, "generalized-kropina"},
    {Family::Matsumoto, "matsumoto"},
    {Family::Riemannian, "riemannian"},
}};

void check_dimension(const Expr& e, std::size_t dim, const char* what) {
  if (e.dimension() > dim) {
    throw Error(std::string(what) + " references x" + std::to_string(e.dimension()) +
                " but the space has dimension " + std::to_string(dim));
  }
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& entry : kFamilies) {
    if (entry.family == f) return entry.name;
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (const auto& entry : kFamilies) {
    if (entry.name == name) return entry.family;
  }
  throw Error("unknown metric family '" + std::string(name) + "'");
}

SpaceSpec::SpaceSpec(std::size_t dim, int exponent, Family family, std::vector<Expr> a, std::vector<Expr> b)
    : dim_(dim), exponent_(exponent), family_(family), a_(std::move(a)), b_(std::move(b)) {
  if (dim_ < 2) throw Error("space dimension must be at least 2");
  if (exponent_ < 1) throw Error("metric exponent k must be a positive integer");
  if (a_.size() != dim_ * dim_) throw Error("a must be a " + std::to_string(dim_) + "x" + std::to_string(dim_) + " block");
  if (b_.size() != dim_) throw Error("b must have " + std::to_string(dim_) + " components");
  for (const auto& e : a_) check_dimension(e, dim_, "a entry");
  for (const auto& e : b_) check_dimension(e, dim_, "b component");

  da_.reserve(dim_ * dim_ * dim_);
  for (const auto& e : a_) {
    for (std::size_t l = 0; l < dim_; ++l) da_.push_back(diff(e, l));
  }
  db_.reserve(dim_ * dim_);
  for (const auto& e : b_) {
    for (std::size_t l = 0; l < dim_; ++l) db_.push_back(diff(e, l));
  }
}

SpaceSpec SpaceSpec::from_potential(std::size_t dim, int exponent, Family family, std::vector<Expr> a,
                                    Expr potential) {
  check_dimension(potential, dim, "b potential");
  std::vector<Expr> b;
  b.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) b.push_back(diff(potential, i));
  SpaceSpec spec(dim, exponent, family, std::move(a), std::move(b));
  spec.potential_ = std::move(potential);
  return spec;
}

SpaceSpec SpaceSpec::with_scaled_b(double mu) const {
  const Expr scale = Expr::number(mu);
  if (potential_) return from_potential(dim_, exponent_, family_, a_, scale * *potential_);
  std::vector<Expr> b;
  for (const auto& e : b_) b.push_back(scale * e);
  return SpaceSpec(dim_, exponent_, family_, a_, std::move(b));
}

SpaceSpec SpaceSpec::with_family(Family family, int exponent) const {
  SpaceSpec copy = *this;
  if (exponent < 1) throw Error("metric exponent k must be a positive integer");
  copy.family_ = family;
  copy.exponent_ = exponent;
  return copy;
}

Matrix SpaceSpec::a_at(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw Error("point dimension mismatch");
  const std::span<const double> xs(x.data(), dim_);
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = a_entry<double>(static_cast<std::size_t>(i), static_cast<std::size_t>(j), xs);
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DegenerateMetricError("a(x) is not symmetric", 1);
  }
  const PdCheck pd = pd_check(m);
  if (!pd.positive_definite) throw DegenerateMetricError("a(x) is not positive definite", pd.pivot);
  return m;
}

Vector SpaceSpec::b_at(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) throw Error("point dimension mismatch");
  const std::span<const double> xs(x.data(), dim_);
  Vector v(static_cast<Eigen::Index>(dim_));
  for (std::size_t i = 0; i < dim_; ++i) v[static_cast<Eigen::Index>(i)] = b_entry<double>(i, xs);
  return v;
}

Tensor3 SpaceSpec::da_at(const Vector& x) const {
  const std::span<const double> xs(x.data(), dim_);
  Tensor3 t(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t l = 0; l < dim_; ++l) t(i, j, l) = da_[(i * dim_ + j) * dim_ + l].eval(xs);
    }
  }
  return t;
}

Matrix SpaceSpec::db_at(const Vector& x) const {
  const std::span<const double> xs(x.data(), dim_);
  const auto d = static_cast<Eigen::Index>(dim_);
  Matrix m(d, d);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t l = 0; l < dim_; ++l) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = db_[i * dim_ + l].eval(xs);
    }
  }
  return m;
}

FlagPoint make_flag(const SpaceSpec& spec, const Vector& x, const Vector& y) {
  if (static_cast<std::size_t>(y.size()) != spec.dim() || static_cast<std::size_t>(x.size()) != spec.dim()) {
    throw Error("flag dimension mismatch");
  }
  if (y.cwiseAbs().maxCoeff() == 0.0) throw ZeroDirectionError();
  FlagPoint f;
  f.x = x;
  f.y = y;
  f.a = spec.a_at(x);
  f.b = spec.b_at(x);
  f.y_lower = f.a * y;
  f.alpha = std::sqrt(y.dot(f.y_lower));
  f.beta = f.b.dot(y);
  return f;
}

std::pair<double, double> alpha_beta(const SpaceSpec& spec, const Vector& x, const Vector& y) {
  const FlagPoint f = make_flag(spec, x, y);
  return {f.alpha, f.beta};
}

std::optional<std::string> family_domain_violation(Family family, double alpha, double beta) {
  const std::string name(family_name(family));
  if (!(alpha > 0.0)) return name + ": alpha must be positive";
  switch (family) {
    case Family::GeneralizedSquare:
    case Family::Square:
    case Family::Randers:
      if (!(alpha + beta > 0.0)) return name + ": requires alpha + beta > 0";
      break;
    case Family::Kropina:
    case Family::GeneralizedKropina:
      if (!(beta > 0.0)) return name + ": requires beta > 0";
      break;
    case Family::Matsumoto:
      if (!(alpha - beta > 0.0)) return name + ": requires alpha - beta > 0";
      break;
    case Family::Riemannian:
      break;
  }
  return std::nullopt;
}

PhiPartials phi_partials(Family family, int k, double alpha, double beta) {
  if (auto why = family_domain_violation(family, alpha, beta)) throw DomainError(*why);
  PhiPartials p;
  const double a = alpha;
  const double b = beta;
  switch (family) {
    case Family::GeneralizedSquare: {
      const double n = k;
      const double s = a + b;
      const double sn = std::pow(s, n);
      const double sn1 = std::pow(s, n - 1.0);
      p.F = sn * s / std::pow(a, n);
      p.F_a = (a - n * b) * sn / std::pow(a, n + 1.0);
      p.F_b = (n + 1.0) * sn / std::pow(a, n);
      p.F_aa = n * (n + 1.0) * b * b * sn1 / std::pow(a, n + 2.0);
      p.F_bb = n * (n + 1.0) * sn1 / std::pow(a, n);
      p.F_ab = -n * (n + 1.0) * b * sn1 / std::pow(a, n + 1.0);
      break;
    }
    case Family::Square:
      return phi_partials(Family::GeneralizedSquare, 1, alpha, beta);
    case Family::Randers:
      p.F = a + b;
      p.F_a = 1.0;
      p.F_b = 1.0;
      break;
    case Family::Kropina:
      p.F = a * a / b;
      p.F_a = 2.0 * a / b;
      p.F_b = -a * a / (b * b);
      p.F_aa = 2.0 / b;
      p.F_bb = 2.0 * a * a / (b * b * b);
      p.F_ab = -2.0 * a / (b * b);
      break;
    case Family::GeneralizedKropina: {
      const double n = k;
      p.F = std::pow(a, n + 1.0) / std::pow(b, n);
      p.F_a = (n + 1.0) * std::pow(a, n) / std::pow(b, n);
      p.F_b = -n * std::pow(a, n + 1.0) / std::pow(b, n + 1.0);
      p.F_aa = n * (n + 1.0) * std::pow(a, n - 1.0) / std::pow(b, n);
      p.F_bb = n * (n + 1.0) * std::pow(a, n + 1.0) / std::pow(b, n + 2.0);
      p.F_ab = -n * (n + 1.0) * std::pow(a, n) / std::pow(b, n + 1.0);
      break;
    }
    case Family::Matsumoto: {
      const double u = a - b;
      p.F = a * a / u;
      p.F_a = a * (a - 2.0 * b) / (u * u);
      p.F_b = a * a / (u * u);
      p.F_aa = 2.0 * b * b / (u * u * u);
      p.F_bb = 2.0 * a * a / (u * u * u);
      p.F_ab = -2.0 * a * b / (u * u * u);
      break;
    }
    case Family::Riemannian:
      p.F = a;
      p.F_a = 1.0;
      break;
  }
  return p;
}

double finsler_norm(const SpaceSpec& spec, const Vector& x, const Vector& y) {
  return finsler_norm<double>(spec, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                              std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

}  // namespace finsler
