#include "mdpd/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mdpd/error.hpp"
#include "mdpd/integrals.hpp"

namespace mdpd {

double SmallMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double SmallMatrix::determinant() const { return dim_ == 1 ? a_[0] : a_[0] * a_[3] - a_[1] * a_[2]; }

SmallMatrix SmallMatrix::inverse(bool* ill_conditioned) const {
  const double det = determinant();
  double norm = 0.0;
  for (std::size_t i = 0; i < dim_ * dim_; ++i) norm = std::max(norm, std::abs(a_[i]));
  if (!(std::abs(det) > 0.0) || !std::isfinite(det) || std::abs(det) < 1e-300 * std::max(1.0, norm * norm))
    throw SingularInformationError("information matrix is singular");
  SmallMatrix inv(dim_);
  if (dim_ == 1) {
    inv.a_[0] = 1.0 / a_[0];
  } else {
    inv.a_ = {a_[3] / det, -a_[1] / det, -a_[2] / det, a_[0] / det};
  }
  if (ill_conditioned) {
    double inv_norm = 0.0;
    for (std::size_t i = 0; i < dim_ * dim_; ++i) inv_norm = std::max(inv_norm, std::abs(inv.a_[i]));
    *ill_conditioned = norm * inv_norm * static_cast<double>(dim_) > 1e10;
  }
  return inv;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& rhs) const {
  SmallMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim_; ++k) s += (*this)(i, k) * rhs(k, j);
      out(i, j) = s;
    }
  return out;
}

std::vector<double> SmallMatrix::operator*(std::span<const double> v) const {
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) out[i] += (*this)(i, k) * v[k];
  return out;
}

namespace {

struct InformationTerms {
  SmallMatrix J;
  std::vector<double> xi;
};

InformationTerms information_terms(const ParamVector& theta, double alpha, SandwichMethod method) {
  check_dpd_validity(theta, alpha);
  const std::size_t p = theta.size();
  if (theta.family() == Family::Exponential && method == SandwichMethod::Auto) {
    const double l = theta[0];
    const double j = (1.0 + alpha * alpha) / std::pow(1.0 + alpha, 3) * std::pow(l, alpha - 2.0);
    const double xi = alpha / ((1.0 + alpha) * (1.0 + alpha)) * std::pow(l, alpha - 1.0);
    return {SmallMatrix(1, {j, 0, 0, 0}), {xi}};
  }
  const QuadratureSpec spec = model_quadrature_spec(theta);
  return {SmallMatrix(p, score_outer_by_quadrature(theta, 1.0 + alpha, spec)), xi_by_quadrature(theta, alpha, spec)};
}

}  // namespace

SandwichMatrices sandwich(const ParamVector& theta, double alpha, SandwichMethod method) {
  SandwichMatrices s;
  s.family = theta.family();
  s.theta = theta;
  s.alpha = alpha;
  auto terms = information_terms(theta, alpha, method);
  s.J = terms.J;
  s.xi = terms.xi;
  const std::size_t p = theta.size();

  std::array<double, 4> k2{};
  if (theta.family() == Family::Exponential && method == SandwichMethod::Auto) {
    k2[0] = (1.0 + 4.0 * alpha * alpha) / std::pow(1.0 + 2.0 * alpha, 3) * std::pow(theta[0], 2.0 * alpha - 2.0);
  } else {
    k2 = score_outer_by_quadrature(theta, 1.0 + 2.0 * alpha, model_quadrature_spec(theta));
  }
  s.K = SmallMatrix(p, k2);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) s.K(i, j) -= s.xi[i] * s.xi[j];

  bool ill = false;
  const SmallMatrix j_inv = s.J.inverse(&ill);
  if (ill) s.warnings.push_back("J is ill-conditioned (condition number above 1e10)");
  s.avar = j_inv * s.K * j_inv;
  return s;
}

std::vector<double> asymptotic_se(const FitResult& fit) {
  if (!fit.converged) throw OptimizationError("asymptotic_se: fit did not converge");
  const SandwichMatrices s = sandwich(fit.theta_hat, fit.alpha);
  std::vector<double> se(s.avar.dim());
  for (std::size_t i = 0; i < se.size(); ++i) se[i] = std::sqrt(s.avar(i, i) / static_cast<double>(fit.n_obs));
  return se;
}

double exponential_are(double alpha) {
  const double a2 = alpha * alpha;
  const double mdpde = (1.0 + 4.0 * a2) / std::pow(1.0 + 2.0 * alpha, 3) - a2 / std::pow(1.0 + alpha, 4);
  const double j2 = (1.0 + a2) * (1.0 + a2) / std::pow(1.0 + alpha, 6);
  return j2 / mdpde;
}

std::vector<double> are_table_alphas() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0}; }

AreTable are(const ParamVector& theta, std::span<const double> alphas) {
  AreTable table;
  table.family = theta.family();
  table.theta = theta;
  std::vector<double> mle_var;
  if (theta.family() != Family::Exponential) {
    const SandwichMatrices s0 = sandwich(theta, 0.0);
    for (std::size_t i = 0; i < theta.size(); ++i) mle_var.push_back(s0.avar(i, i));
  }
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= kMaxAlpha)) throw DomainError("are: alpha outside [0, 1]");
    AreRow row{alpha, {}};
    if (alpha == 0.0) {
      row.are.assign(theta.size(), 1.0);
    } else if (theta.family() == Family::Exponential) {
      row.are = {exponential_are(alpha)};
    } else {
      const SandwichMatrices s = sandwich(theta, alpha);
      for (std::size_t i = 0; i < theta.size(); ++i) row.are.push_back(mle_var[i] / s.avar(i, i));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_are_csv(std::ostream& out, const AreTable& table) {
  const auto names = param_names(table.family);
  out << "alpha,param,are\n";
  const auto old = out.precision(10);
  for (const auto& row : table.rows)
    for (std::size_t i = 0; i < row.are.size(); ++i) out << row.alpha << ',' << names[i] << ',' << row.are[i] << '\n';
  out.precision(old);
}

InfluenceCurve::InfluenceCurve(const ParamVector& theta0, double alpha)
    : theta_(theta0), alpha_(alpha), j_inv_(theta0.size()), j_(theta0.size()) {
  auto terms = information_terms(theta0, alpha, SandwichMethod::Auto);
  j_ = terms.J;
  j_inv_ = terms.J.inverse();
  xi_ = std::move(terms.xi);
}

std::vector<double> InfluenceCurve::operator()(double y) const {
  const std::vector<double> u = score(theta_, y);
  const double w = alpha_ == 0.0 ? 1.0 : std::exp(alpha_ * log_density(theta_, y));
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = (w == 0.0 ? 0.0 : u[i] * w) - xi_[i];
  return j_inv_ * std::span<const double>(r);
}

double InfluenceCurve::component(std::size_t c, double y) const {
  if (c >= theta_.size()) throw DomainError("influence component out of range");
  const std::vector<double> u = score(theta_, y);
  const double w = alpha_ == 0.0 ? 1.0 : std::exp(alpha_ * log_density(theta_, y));
  return ((w == 0.0 ? 0.0 : u[c] * w) - xi_[c]) / j_(c, c);
}

double InfluenceCurve::norm(double y) const {
  const auto v = (*this)(y);
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> influence_function(const ParamVector& theta0, double alpha, double y) {
  if (!(y > 0.0)) throw DomainError("influence_function: y must be positive");
  return InfluenceCurve(theta0, alpha)(y);
}

std::vector<double> influence_grid(const ParamVector& theta0, std::size_t points) {
  if (points < 2) throw DomainError("influence_grid: need at least two points");
  const double lo = std::log(quantile(theta0, 1e-6));
  const double hi = std::log(quantile(theta0, 1.0 - 1e-6) * 1e6);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  return grid;
}

double if_supremum(const ParamVector& theta0, double alpha, std::size_t points) {
  const InfluenceCurve curve(theta0, alpha);
  double best = 0.0;
  for (double y : influence_grid(theta0, points)) best = std::max(best, curve.norm(y));
  return best;
}

}  // namespace mdpd
