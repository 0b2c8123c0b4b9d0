#include "drw/soil.hpp"

#include <algorithm>
#include <cmath>

namespace drw {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid soil parameters: " + what);
}

double se_clamped(double se) {
  // Avoids 0^negative in the Mualem bracket.
  return std::clamp(se, 1e-12, 1.0);
}

}  // namespace

void validate(const SoilModel& model) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        require(p.K_s > 0.0, "K_s must be > 0");
        require(p.theta_r >= 0.0 && p.theta_r < p.theta_s && p.theta_s <= 1.0,
                "need 0 <= theta_r < theta_s <= 1");
        if constexpr (std::is_same_v<T, HaverkampParams>) {
          require(p.A_h > 0.0 && p.alpha_h > 0.0 && p.beta_h > 0.0 && p.gamma_h > 0.0,
                  "Haverkamp coefficients must be > 0");
        } else if constexpr (std::is_same_v<T, VanGenuchtenParams>) {
          require(p.alpha_vg > 0.0, "alpha must be > 0");
          require(p.n_vg > 1.0, "n must be > 1");
        } else {
          require(p.alpha_g > 0.0, "alpha must be > 0");
        }
      },
      model);
}

std::string kind_name(const SoilModel& model) {
  if (std::holds_alternative<HaverkampParams>(model)) return "haverkamp";
  if (std::holds_alternative<VanGenuchtenParams>(model)) return "van_genuchten";
  return "gardner";
}

double water_content(const SoilModel& model, double psi) {
  if (psi >= 0.0) {
    return std::visit([](const auto& p) { return p.theta_s; }, model);
  }
  return std::visit(
      [psi](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        const double h = std::abs(psi);
        if constexpr (std::is_same_v<T, HaverkampParams>) {
          return p.theta_r + p.alpha_h * (p.theta_s - p.theta_r) /
                                 (p.alpha_h + std::pow(h, p.beta_h));
        } else if constexpr (std::is_same_v<T, VanGenuchtenParams>) {
          const double m = 1.0 - 1.0 / p.n_vg;
          const double se = std::pow(1.0 + std::pow(p.alpha_vg * h, p.n_vg), -m);
          return p.theta_r + (p.theta_s - p.theta_r) * se;
        } else {
          return p.theta_r + (p.theta_s - p.theta_r) * std::exp(p.alpha_g * psi);
        }
      },
      model);
}

double hydraulic_conductivity(const SoilModel& model, double psi) {
  if (psi >= 0.0) {
    return std::visit([](const auto& p) { return p.K_s; }, model);
  }
  return std::visit(
      [psi](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        const double h = std::abs(psi);
        if constexpr (std::is_same_v<T, HaverkampParams>) {
          return p.K_s * p.A_h / (p.A_h + std::pow(h, p.gamma_h));
        } else if constexpr (std::is_same_v<T, VanGenuchtenParams>) {
          const double m = 1.0 - 1.0 / p.n_vg;
          const double se =
              se_clamped(std::pow(1.0 + std::pow(p.alpha_vg * h, p.n_vg), -m));
          const double l = p.l_vg > 0.0 ? p.l_vg : p.n_vg;
          const double inner = 1.0 - std::pow(se, l / (l - 1.0));
          const double bracket = 1.0 - std::pow(std::max(inner, 0.0), (l - 1.0) / l);
          const double k = p.K_s * std::sqrt(se) * bracket * bracket;
          return std::max(k, 1e-300);
        } else {
          return p.K_s * std::exp(p.alpha_g * psi);
        }
      },
      model);
}

MoistureCapacity moisture_capacity(const SoilModel& model, double psi) {
  if (psi > 0.0) return {0.0, false};
  const bool at_kink = (psi == 0.0);
  const double value = std::visit(
      [psi](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        const double h = std::abs(psi);
        if constexpr (std::is_same_v<T, HaverkampParams>) {
          // d/dpsi of alpha dθ / (alpha + h^beta): chain rule with h = -psi.
          const double hb = std::pow(h, p.beta_h);
          const double denom = p.alpha_h + hb;
          if (h == 0.0 && p.beta_h < 1.0) return 0.0;
          const double dh = h > 0.0 ? std::pow(h, p.beta_h - 1.0) : (p.beta_h == 1.0 ? 1.0 : 0.0);
          return p.alpha_h * (p.theta_s - p.theta_r) * p.beta_h * dh / (denom * denom);
        } else if constexpr (std::is_same_v<T, VanGenuchtenParams>) {
          const double m = 1.0 - 1.0 / p.n_vg;
          const double an = std::pow(p.alpha_vg * h, p.n_vg);
          const double danh =
              h > 0.0 ? p.n_vg * p.alpha_vg * std::pow(p.alpha_vg * h, p.n_vg - 1.0) : 0.0;
          return (p.theta_s - p.theta_r) * m * std::pow(1.0 + an, -m - 1.0) * danh;
        } else {
          return p.alpha_g * (p.theta_s - p.theta_r) * std::exp(p.alpha_g * psi);
        }
      },
      model);
  return {value, at_kink};
}

void validate(const FeddesParams& p) {
  require(p.S_max >= 0.0, "S_max must be >= 0");
  require(p.psi_4 <= p.psi_3 && p.psi_3 <= p.psi_2 && p.psi_2 <= p.psi_1 && p.psi_1 <= 0.0,
          "need psi_4 <= psi_3 <= psi_2 <= psi_1 <= 0");
}

double feddes_sink(const FeddesParams& p, double psi) {
  double sigma = 0.0;
  if (psi >= p.psi_1 || psi <= p.psi_4) {
    sigma = 0.0;
  } else if (psi <= p.psi_2 && psi >= p.psi_3) {
    sigma = 1.0;
  } else if (psi > p.psi_2) {
    sigma = (p.psi_1 - psi) / (p.psi_1 - p.psi_2);
  } else {
    sigma = (psi - p.psi_4) / (p.psi_3 - p.psi_4);
  }
  return sigma * p.S_max;
}

}  // namespace drw
