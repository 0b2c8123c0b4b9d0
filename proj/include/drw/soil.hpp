#pragma once

#include <string>
#include <variant>

#include "drw/common.hpp"

namespace drw {

/// Haverkamp retention/conductivity pair:
///   K(psi)     = K_s A / (A + |psi|^gamma)
///   theta(psi) = theta_r + alpha (theta_s - theta_r) / (alpha + |psi|^beta)
struct HaverkampParams {
  double K_s;
  double theta_s;
  double theta_r;
  double A_h;
  double gamma_h;
  double alpha_h;
  double beta_h;
};

/// Mualem-van Genuchten pair. The conductivity is evaluated through
/// theta(psi) exactly as the closed form
///   K(theta) = K_s sqrt(Se) {1 - [1 - Se^{l/(l-1)}]^{(l-1)/l}}^2,
/// with Se the effective saturation. `l_vg <= 0` selects the classical
/// Mualem choice l = n (the case studies never state l; see README).
struct VanGenuchtenParams {
  double K_s;
  double theta_s;
  double theta_r;
  double alpha_vg;  // 1/length
  double n_vg;      // > 1
  double l_vg = 0.0;
};

/// Gardner exponential pair: K = K_s e^{alpha psi}, theta follows the same
/// exponential between theta_r and theta_s.
struct GardnerParams {
  double K_s;
  double theta_s;
  double theta_r;
  double alpha_g;  // 1/length
};

using SoilModel = std::variant<HaverkampParams, VanGenuchtenParams, GardnerParams>;

/// Throws ConfigError when a type invariant is violated.
void validate(const SoilModel& model);
std::string kind_name(const SoilModel& model);

/// theta(psi). psi > 0 clamps to theta_s (saturated plateau).
double water_content(const SoilModel& model, double psi);

/// K(psi). psi > 0 clamps to K_s. Always in (0, K_s].
double hydraulic_conductivity(const SoilModel& model, double psi);

struct MoistureCapacity {
  double value;            // dtheta/dpsi
  bool one_sided = false;  // true when evaluated at the non-smooth point psi = 0
};

/// dtheta/dpsi, closed form. At psi = 0 the one-sided derivative from below
/// is returned and flagged; for psi > 0 the plateau derivative is 0.
MoistureCapacity moisture_capacity(const SoilModel& model, double psi);

/// Feddes root-uptake sink S = sigma(psi) S_max with a piecewise-linear
/// stress factor: zero outside [psi_4, psi_1], one on [psi_3, psi_2].
struct FeddesParams {
  double S_max;  // 1/time
  double psi_1;
  double psi_2;
  double psi_3;
  double psi_4;
};

void validate(const FeddesParams& params);
double feddes_sink(const FeddesParams& params, double psi);

}  // namespace drw
