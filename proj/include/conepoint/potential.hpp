// Attraction/repulsion potentials on the reduced attitude, and the smooth
// tanh-over-sqrt bridge shared with the switching variables.
#pragma once

#include <cmath>
#include <span>

#include "conepoint/attitude.hpp"

namespace conepoint {

// Unit: the bridge climbs 0 -> 1 and the tanh argument gain is
// steepness * (hi - lo). Field: it climbs 0 -> ceiling and the gain is
// steepness * (hi - lo) / ceiling, which makes the slope at `mid` equal
// `steepness` when mid is the interval centre.
enum class BridgeScale { unit, field };

struct BridgeShape {
  double lo = 0.0;
  double mid = 0.5;
  double hi = 1.0;
  double steepness = 1.0;
  double ceiling = 1.0;  // only read in field mode

  // Throws InvalidParameter unless lo < mid < hi, steepness > 0, ceiling > 0.
  void validate() const;
};

// Distance to a knot under which the bridge returns its limit value.
inline constexpr double kKnotGuard = 1e-12;

// 0 below lo, full scale at or above hi, smooth in between.
double bridge(const BridgeShape& shape, double beta, BridgeScale mode);
// d(bridge)/d(beta); zero outside (lo, hi).
double bridge_slope(const BridgeShape& shape, double beta, BridgeScale mode);

// Forbidden inertial direction with its keep-out half-angle theta_f, the
// repulsion onset angle theta_0 and inner buffer angle theta_1 (radians),
// repulsion ceiling k_r and the slope parameter r.
class ObstacleCone {
 public:
  // Throws InvalidParameter unless theta_0 > theta_1 >= theta_f > 0,
  // theta_0 < pi, k_r > 0, r_slope > 0 and f_inertial is a unit vector.
  ObstacleCone(const Vec3& f_inertial, double theta_f, double theta_0, double theta_1, double k_r,
               double r_slope);

  const Vec3& direction() const { return f_inertial_; }
  double theta_f() const { return theta_f_; }
  double theta_0() const { return theta_0_; }
  double theta_1() const { return theta_1_; }
  double k_r() const { return k_r_; }
  double r_slope() const { return r_slope_; }

  double L0() const { return std::cos(theta_0_); }
  double L1() const { return std::cos(theta_1_); }
  double Lm() const { return 0.5 * (L0() + L1()); }
  double forbidden_cosine() const { return std::cos(theta_f_); }

  // r (L1 - L0) / k_r. The slope peak sits at L_m (so k_r∇β <= r holds)
  // only when this is at least kMinSlopeGain.
  double slope_gain() const { return r_slope_ * (L1() - L0()) / k_r_; }

  BridgeShape shape() const { return {L0(), Lm(), L1(), r_slope_, k_r_}; }

  friend bool operator==(const ObstacleCone&, const ObstacleCone&) = default;

 private:
  Vec3 f_inertial_;
  double theta_f_;
  double theta_0_;
  double theta_1_;
  double k_r_;
  double r_slope_;
};

// sqrt(3/2): below this slope gain the repulsion gradient overshoots r.
inline constexpr double kMinSlopeGain = 1.2247448713915890;

double attraction(double x_e, double k_a);
double repulsion(const ObstacleCone& cone, double beta);
// ∂U_r/∂β, i.e. k_r ∇β.
double repulsion_grad_beta(const ObstacleCone& cone, double beta);

// U = k_a x_e + Σ U_r(β_i). Throws InvalidInput on size mismatch.
double total_potential(double x_e, double k_a, std::span<const ObstacleCone> cones,
                       std::span<const double> betas);

}  // namespace conepoint
