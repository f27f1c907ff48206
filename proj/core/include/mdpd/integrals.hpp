#pragma once

#include <array>
#include <vector>

#include "mdpd/family.hpp"
#include "mdpd/quadrature.hpp"

namespace mdpd {

/// Quadrature settings centred on the model median.
QuadratureSpec model_quadrature_spec(const ParamVector& p);

/// Integral of u_theta f_theta^(1+alpha), entry by entry.
std::vector<double> xi_by_quadrature(const ParamVector& p, double alpha, const QuadratureSpec& spec);

/// Integral of u_theta u_theta^T f_theta^power, row-major p x p.
std::array<double, 4> score_outer_by_quadrature(const ParamVector& p, double power, const QuadratureSpec& spec);

}  // namespace mdpd
