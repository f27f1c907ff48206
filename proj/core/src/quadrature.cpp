#include "mdpd/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "mdpd/error.hpp"

namespace mdpd {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double resabs;  // integral of |f| over the panel
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) throw QuadratureError("integrand is not finite at x = " + std::to_string(x), std::nan(""), INFINITY);
  return v;
}

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = checked(f, centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double resabs = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, centre - dx);
    f2[j] = checked(f, centre + dx);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * kronrod;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = kronrod * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && error != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) error = std::max(50.0 * eps * resabs, error);
  return {lo, hi, value, error, resabs};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tolerance > 0.0) || !(rel_tolerance > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("QuadratureSpec: scale must be positive");
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double lo, double hi,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (!(hi > lo)) throw DomainError("integrate_interval: need lo < hi");

  // Start from a uniform partition so narrow peaks are not missed entirely.
  const int initial = std::min(16, spec.max_subdivisions);
  std::priority_queue<Panel> panels;
  double total = 0.0;
  double total_error = 0.0;
  double total_abs = 0.0;
  for (int i = 0; i < initial; ++i) {
    const double a = lo + (hi - lo) * i / initial;
    const double b = (i + 1 == initial) ? hi : lo + (hi - lo) * (i + 1) / initial;
    Panel p = gauss_kronrod(f, a, b);
    total += p.value;
    total_error += p.error;
    total_abs += p.resabs;
    panels.push(p);
  }

  // Below twice the rounding floor of the panel estimates no refinement can help.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto tolerance = [&] {
    return std::max({spec.abs_tolerance, spec.rel_tolerance * std::abs(total), 100.0 * eps * total_abs});
  };
  int count = initial;
  while (total_error > tolerance() && count < spec.max_subdivisions) {
    const Panel worst = panels.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // cannot split further in floating point
    panels.pop();
    const Panel left = gauss_kronrod(f, worst.lo, mid);
    const Panel right = gauss_kronrod(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_abs += left.resabs + right.resabs - worst.resabs;
    panels.push(left);
    panels.push(right);
    ++count;
  }

  // Re-sum to shed accumulated cancellation in the running totals.
  total = 0.0;
  total_error = 0.0;
  total_abs = 0.0;
  while (!panels.empty()) {
    total += panels.top().value;
    total_error += panels.top().error;
    total_abs += panels.top().resabs;
    panels.pop();
  }
  if (total_error > 10.0 * tolerance()) {
    throw QuadratureError("quadrature did not converge after " + std::to_string(count) +
                              " subdivisions (error estimate " + std::to_string(total_error) + ")",
                          total, total_error);
  }
  return {total, total_error, count};
}

QuadratureResult integrate_halfline(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  spec.validate();
  const double s = spec.scale;
  const auto mapped = [&f, s](double t) {
    const double one_minus = 1.0 - t;
    const double x = s * t / one_minus;
    const double jac = s / (one_minus * one_minus);
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate_interval(mapped, 0.0, 1.0, spec);
}

}  // namespace mdpd
