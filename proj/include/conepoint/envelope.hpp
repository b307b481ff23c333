// Switching prescribed-performance envelope, the error transformation, the
// ln-cosh barrier value, and the Ω_s / Ω_v switching variables.
#pragma once

#include <span>
#include <utility>

#include "conepoint/potential.hpp"

namespace conepoint {

struct EnvelopeConfig {
  double rho_0 = 3.0;
  double rho_inf = 1e-3;
  double k_rho = 0.1;
  // Below this |e| the ė/e term of the frozen mode evaluates to 0.
  double e_min = 1e-9;

  // Throws InvalidParameter unless rho_0 > rho_inf > 0, k_rho > 0, e_min >= 0.
  void validate() const;
  friend bool operator==(const EnvelopeConfig&, const EnvelopeConfig&) = default;
};

struct EnvelopeState {
  double rho = 0.0;
  double epsilon = 0.0;
};

// Knots are cosines of the boresight-to-obstacle angle.
struct SwitchConfig {
  double V0 = 0.0, V1 = 0.0, Vm = 0.0;
  double P0 = 0.0, P1 = 0.0, Pm = 0.0;
  double m = 5.0;
  double n = 2.0;
  double delta = 0.01;

  // V0 = L0 - 2δ, Vm = L0 - δ, V1 = L0; P0 = V1,
  // P1 = L0 + p1_fraction (L1 - L0), Pm = (P0 + P1) / 2.
  // Throws InvalidParameter for δ <= 0, m or n <= 0, or p1_fraction outside (0, 1].
  static SwitchConfig for_cone(const ObstacleCone& cone, double delta, double m, double n,
                               double p1_fraction);

  BridgeShape omega_s_shape() const { return {V0, Vm, V1, m, 1.0}; }
  BridgeShape omega_v_shape() const { return {P0, Pm, P1, n, 1.0}; }
};

double omega_s(const SwitchConfig& cfg, double beta);
double omega_v(const SwitchConfig& cfg, double beta);

struct Switches {
  double omega_s = 0.0;
  double omega_v = 0.0;
};

// Element-wise max over obstacles. Throws InvalidInput for an empty list.
Switches effective_switches(const SwitchConfig& cfg, std::span<const double> betas);
// Per-obstacle knots; sizes must match.
Switches effective_switches(std::span<const SwitchConfig> cfgs, std::span<const double> betas);

// ρ̇ = −k_ρ(ρ − ρ_∞)(1 − Ω_s) + (ė/e) ρ Ω_s. Throws InvalidState for ρ <= 0.
double sppf_rhs(const EnvelopeState& state, const EnvelopeConfig& cfg, double omega_s, double e,
                double e_dot);

// ε = x_e / ρ. Throws InvalidState for ρ <= 0.
double translated_error(double x_e, double rho);

// ln cosh(x) without overflow.
double log_cosh(double x);

// V_B = g F ln cosh(ε / F).
double blf_value(double epsilon, double g, double F);

}  // namespace conepoint
