#include "solver/lmo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/types.hpp"

namespace lpfusion::solver {

std::optional<Eigen::VectorXd> lmo_lp_ball(const Eigen::VectorXd& grad,
                                           double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lmo_lp_ball: p must be >= 1, got " +
                                std::to_string(p));
  }
  if (!grad.allFinite()) {
    throw std::invalid_argument("lmo_lp_ball: non-finite gradient entry");
  }
  const Eigen::Index r = grad.size();
  if (r == 0) {
    throw std::invalid_argument("lmo_lp_ball: empty gradient");
  }

  const Eigen::VectorXd mag = grad.cwiseAbs();
  Eigen::Index max_index = 0;
  const double max_mag = mag.maxCoeff(&max_index);
  if (max_mag == 0.0) {
    return std::nullopt;
  }
  // maxCoeff does not pin which of several maxima it reports; take the
  // lowest index for reproducibility.
  for (Eigen::Index i = 0; i < r; ++i) {
    if (mag[i] == max_mag) {
      max_index = i;
      break;
    }
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(r);
  if (p == 1.0) {
    z[max_index] = grad[max_index] > 0.0 ? -1.0 : 1.0;
    return z;
  }
  if (std::isinf(p)) {
    for (Eigen::Index i = 0; i < r; ++i) {
      if (grad[i] > 0.0) {
        z[i] = -1.0;
      } else if (grad[i] < 0.0) {
        z[i] = 1.0;
      }
    }
    return z;
  }

  // |g|^{1/(p-1)} with the common max factor divided out; the scaled
  // entries lie in [0,1] so neither the power nor the norm can overflow.
  const double exponent = 1.0 / (p - 1.0);
  Eigen::VectorXd scaled(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    scaled[i] = std::pow(mag[i] / max_mag, exponent);
  }
  const double norm = core::lp_norm(scaled, p);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (grad[i] > 0.0) {
      z[i] = -scaled[i] / norm;
    } else if (grad[i] < 0.0) {
      z[i] = scaled[i] / norm;
    }
  }
  return z;
}

double duality_gap(const Eigen::VectorXd& omega, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& grad) {
  if (omega.size() != z.size() || omega.size() != grad.size()) {
    throw core::DimensionError(
        "duality_gap: omega, z and grad must have equal length (" +
        std::to_string(omega.size()) + ", " + std::to_string(z.size()) + ", " +
        std::to_string(grad.size()) + ")");
  }
  return (omega - z).dot(grad);
}

}  // namespace lpfusion::solver
