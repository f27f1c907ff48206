#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mdpd/estimator.hpp"
#include "mdpd/family.hpp"
#include "mdpd/sample.hpp"

namespace mdpd {

/// H_{alpha,n}(theta_hat) + (1 + alpha)^-1 n^-1 Tr[J^-1 K] at the fitted parameters.
double ric_from_fit(const FitResult& fit, const Sample& sample);
double ric(Family family, double alpha, const Sample& sample, const FitOptions& options = {});

struct SelectionOptions {
  double grid_step = 0.05;
  double refine_width = 1e-3;
  bool fast = false;  // grid only
  FitOptions fit{};
  std::size_t threads = 0;  // families searched concurrently
};

struct RicPoint {
  Family family = Family::Exponential;
  double alpha = 0.0;
  double ric = 0.0;
};

struct FamilySelection {
  Family family = Family::Exponential;
  double alpha_star_ric = 0.0;
  double ric_min = 0.0;
  FitResult fit;
};

struct SelectionReport {
  std::vector<FamilySelection> families;  // candidates that produced at least one RIC, input order
  Family winner = Family::Exponential;
  std::vector<RicPoint> ric_table;        // every evaluated (family, alpha)
  std::vector<std::string> warnings;

  const FamilySelection& winning() const;
};

/// Minimizes RIC over alpha per family (grid, then golden-section) and picks
/// the family with the smallest minimum. Ties go to fewer parameters, then
/// to the order exponential, gamma, lognormal, Weibull.
SelectionReport select_model(std::span<const Family> families, const Sample& sample, const SelectionOptions& options = {});

/// CSV `family,alpha,ric`.
void write_ric_csv(std::ostream& out, const SelectionReport& report);

}  // namespace mdpd
