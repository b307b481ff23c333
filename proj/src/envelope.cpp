#include "conepoint/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conepoint/errors.hpp"

namespace conepoint {

void EnvelopeConfig::validate() const {
  if (!(rho_inf > 0.0)) throw InvalidParameter("rho_inf must be > 0");
  if (!(rho_0 > rho_inf)) throw InvalidParameter("rho_0 must exceed rho_inf");
  if (!(k_rho > 0.0)) throw InvalidParameter("k_rho must be > 0");
  if (!(e_min >= 0.0)) throw InvalidParameter("e_min must be >= 0");
}

SwitchConfig SwitchConfig::for_cone(const ObstacleCone& cone, double delta, double m, double n,
                                    double p1_fraction) {
  if (!(delta > 0.0)) throw InvalidParameter("switching delta must be > 0");
  if (!(m > 0.0) || !(n > 0.0)) throw InvalidParameter("switching steepness m, n must be > 0");
  if (!(p1_fraction > 0.0 && p1_fraction <= 1.0)) {
    throw InvalidParameter("p1_fraction must lie in (0, 1]");
  }
  const double L0 = cone.L0();
  const double L1 = cone.L1();
  SwitchConfig cfg;
  cfg.V0 = L0 - 2.0 * delta;
  cfg.Vm = L0 - delta;
  cfg.V1 = L0;
  cfg.P0 = cfg.V1;
  cfg.P1 = p1_fraction == 1.0 ? L1 : L0 + p1_fraction * (L1 - L0);
  cfg.Pm = 0.5 * (cfg.P0 + cfg.P1);
  cfg.m = m;
  cfg.n = n;
  cfg.delta = delta;
  if (cfg.V0 < -1.0) throw InvalidParameter("switching band V0 falls below -1");
  return cfg;
}

double omega_s(const SwitchConfig& cfg, double beta) {
  return bridge(cfg.omega_s_shape(), beta, BridgeScale::unit);
}

double omega_v(const SwitchConfig& cfg, double beta) {
  return bridge(cfg.omega_v_shape(), beta, BridgeScale::unit);
}

Switches effective_switches(const SwitchConfig& cfg, std::span<const double> betas) {
  if (betas.empty()) throw InvalidInput("effective_switches needs at least one obstacle");
  Switches out;
  for (double b : betas) {
    out.omega_s = std::max(out.omega_s, omega_s(cfg, b));
    out.omega_v = std::max(out.omega_v, omega_v(cfg, b));
  }
  return out;
}

Switches effective_switches(std::span<const SwitchConfig> cfgs, std::span<const double> betas) {
  if (betas.empty()) throw InvalidInput("effective_switches needs at least one obstacle");
  if (cfgs.size() != betas.size()) throw InvalidInput("one switch config per obstacle required");
  Switches out;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    out.omega_s = std::max(out.omega_s, omega_s(cfgs[i], betas[i]));
    out.omega_v = std::max(out.omega_v, omega_v(cfgs[i], betas[i]));
  }
  return out;
}

double sppf_rhs(const EnvelopeState& state, const EnvelopeConfig& cfg, double omega_s, double e,
                double e_dot) {
  if (!(state.rho > 0.0)) throw InvalidState("envelope rho must stay positive");
  const double decay = -cfg.k_rho * (state.rho - cfg.rho_inf) * (1.0 - omega_s);
  if (omega_s == 0.0 || std::abs(e) < cfg.e_min) return decay;
  return decay + (e_dot / e) * state.rho * omega_s;
}

double translated_error(double x_e, double rho) {
  if (!(rho > 0.0)) throw InvalidState("envelope rho must be positive");
  return x_e / rho;
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double blf_value(double epsilon, double g, double F) { return g * F * log_cosh(epsilon / F); }

}  // namespace conepoint
