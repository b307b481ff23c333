#include "conepoint/potential.hpp"

#include <cmath>
#include <numbers>

#include "conepoint/errors.hpp"

namespace conepoint {
namespace {

// sech^2 without overflow for large |g|.
double sech2(double g) {
  const double e = std::exp(-2.0 * std::abs(g));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double scale_of(const BridgeShape& s, BridgeScale mode) {
  return mode == BridgeScale::field ? s.ceiling : 1.0;
}

double gain_of(const BridgeShape& s, BridgeScale mode) {
  return s.steepness * (s.hi - s.lo) / scale_of(s, mode);
}

}  // namespace

void BridgeShape::validate() const {
  if (!(lo < mid && mid < hi)) throw InvalidParameter("bridge knots must satisfy lo < mid < hi");
  if (!(steepness > 0.0)) throw InvalidParameter("bridge steepness must be > 0");
  if (!(ceiling > 0.0)) throw InvalidParameter("bridge ceiling must be > 0");
}

double bridge(const BridgeShape& s, double beta, BridgeScale mode) {
  const double scale = scale_of(s, mode);
  if (beta < s.lo + kKnotGuard) return 0.0;
  if (beta > s.hi - kKnotGuard) return scale;
  const double g = gain_of(s, mode) * (beta - s.mid) / std::sqrt((beta - s.lo) * (s.hi - beta));
  return 0.5 * scale * (std::tanh(g) + 1.0);
}

double bridge_slope(const BridgeShape& s, double beta, BridgeScale mode) {
  if (beta < s.lo + kKnotGuard || beta > s.hi - kKnotGuard) return 0.0;
  const double c = gain_of(s, mode);
  const double p = (beta - s.lo) * (s.hi - beta);
  const double dp = s.hi + s.lo - 2.0 * beta;
  const double sp = std::sqrt(p);
  const double g = c * (beta - s.mid) / sp;
  const double dg = c * (2.0 * p - (beta - s.mid) * dp) / (2.0 * p * sp);
  return 0.5 * scale_of(s, mode) * sech2(g) * dg;
}

ObstacleCone::ObstacleCone(const Vec3& f_inertial, double theta_f, double theta_0, double theta_1,
                           double k_r, double r_slope)
    : f_inertial_(f_inertial),
      theta_f_(theta_f),
      theta_0_(theta_0),
      theta_1_(theta_1),
      k_r_(k_r),
      r_slope_(r_slope) {
  if (std::abs(f_inertial.norm() - 1.0) > kUnitTolerance) {
    throw InvalidParameter("obstacle direction must be a unit vector");
  }
  if (!(theta_f > 0.0 && theta_1 >= theta_f && theta_0 > theta_1 && theta_0 < std::numbers::pi)) {
    throw InvalidParameter("cone angles must satisfy 0 < theta_f <= theta_1 < theta_0 < pi");
  }
  if (!(k_r > 0.0)) throw InvalidParameter("k_r must be > 0");
  if (!(r_slope > 0.0)) throw InvalidParameter("r_slope must be > 0");
}

double attraction(double x_e, double k_a) { return k_a * x_e; }

double repulsion(const ObstacleCone& cone, double beta) {
  return bridge(cone.shape(), beta, BridgeScale::field);
}

double repulsion_grad_beta(const ObstacleCone& cone, double beta) {
  return bridge_slope(cone.shape(), beta, BridgeScale::field);
}

double total_potential(double x_e, double k_a, std::span<const ObstacleCone> cones,
                       std::span<const double> betas) {
  if (cones.size() != betas.size()) throw InvalidInput("one beta per obstacle required");
  double u = attraction(x_e, k_a);
  for (std::size_t i = 0; i < cones.size(); ++i) u += repulsion(cones[i], betas[i]);
  return u;
}

}  // namespace conepoint
