#pragma once

#include <Eigen/Dense>
#include <optional>

namespace lpfusion::solver {

// Linear minimization oracle over the unit lp ball:
//   argmin_{||z||_p <= 1} z^T g.
//
// For 1 < p < inf the minimizer is the closed form
//   z = -sign(g) .* |g|^{1/(p-1)} / || |g|^{1/(p-1)} ||_p,
// evaluated on entries scaled by max|g_i| so that exponents as large as
// 31 (p = 32/31) stay in [0,1]. p = 1 returns the signed unit coordinate
// at the first index of max|g_i|; p = inf returns -sign(g) with zeros of
// g mapped to 0. The result always has ||z||_p = 1.
//
// A zero gradient has no descent direction: nullopt signals "stationary".
std::optional<Eigen::VectorXd> lmo_lp_ball(const Eigen::VectorXd& grad,
                                           double p);

// Frank-Wolfe certificate (omega - z)^T g; upper-bounds f(omega) - f* for
// convex f when z is the LMO output at omega.
double duality_gap(const Eigen::VectorXd& omega, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& grad);

}  // namespace lpfusion::solver
