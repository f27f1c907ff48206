#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/family.hpp"

namespace mdpd {

/// Symmetric-use square matrix of dimension 1 or 2.
class SmallMatrix {
 public:
  explicit SmallMatrix(std::size_t dim = 1) : dim_(dim) {}
  SmallMatrix(std::size_t dim, const std::array<double, 4>& row_major) : dim_(dim), a_(row_major) {}

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

  double trace() const;
  double determinant() const;
  /// Cofactor inverse. Throws SingularInformationError for a singular
  /// matrix; condition numbers above 1e10 are reported through ill_conditioned.
  SmallMatrix inverse(bool* ill_conditioned = nullptr) const;
  SmallMatrix operator*(const SmallMatrix& rhs) const;
  std::vector<double> operator*(std::span<const double> v) const;

 private:
  std::size_t dim_;
  std::array<double, 4> a_{};
};

struct SandwichMatrices {
  Family family = Family::Exponential;
  ParamVector theta = ParamVector::exponential(1.0);
  double alpha = 0.0;
  SmallMatrix J;
  SmallMatrix K;
  std::vector<double> xi;
  SmallMatrix avar;  // J^-1 K J^-1
  std::vector<std::string> warnings;
};

enum class SandwichMethod {
  Auto,       // closed form for the exponential, quadrature otherwise
  Quadrature  // quadrature for every family
};

SandwichMatrices sandwich(const ParamVector& theta, double alpha, SandwichMethod method = SandwichMethod::Auto);

/// sqrt(diag(avar) / n) at the fitted parameters.
std::vector<double> asymptotic_se(const FitResult& fit);

/// Exponential ARE, free of lambda.
double exponential_are(double alpha);

struct AreRow {
  double alpha = 0.0;
  std::vector<double> are;  // one entry per parameter
};

struct AreTable {
  Family family = Family::Exponential;
  ParamVector theta = ParamVector::exponential(1.0);
  std::vector<AreRow> rows;
};

/// Tabulated alphas: 0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0.
std::vector<double> are_table_alphas();

/// Component-wise ratio of MLE to MDPDE asymptotic variances.
AreTable are(const ParamVector& theta, std::span<const double> alphas);

/// CSV `alpha,param,are`.
void write_are_csv(std::ostream& out, const AreTable& table);

/// J^-1 [u(y) f^alpha(y) - xi]. Evaluating many y at one (theta, alpha)
/// should go through InfluenceCurve, which computes J and xi once.
std::vector<double> influence_function(const ParamVector& theta0, double alpha, double y);

class InfluenceCurve {
 public:
  InfluenceCurve(const ParamVector& theta0, double alpha);

  std::vector<double> operator()(double y) const;
  /// IF of parameter `component` with every other parameter held at theta0.
  double component(std::size_t component, double y) const;
  double norm(double y) const;

 private:
  ParamVector theta_;
  double alpha_;
  SmallMatrix j_inv_;
  SmallMatrix j_;
  std::vector<double> xi_;
};

/// Geometric grid over [q(1e-6), q(1 - 1e-6) * 1e6].
std::vector<double> influence_grid(const ParamVector& theta0, std::size_t points);

/// max ||IF(y)|| over influence_grid(theta0, points).
double if_supremum(const ParamVector& theta0, double alpha, std::size_t points = 2000);

}  // namespace mdpd
