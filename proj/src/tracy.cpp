#include "drw/tracy.hpp"

#include <cmath>

namespace drw {

void TracyParams::validate() const {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ConfigError("Tracy domain lengths must be > 0");
  if (!(h_r < 0.0)) throw ConfigError("Tracy background head must be < 0");
  if (series_terms < 1) throw ConfigError("series_terms must be >= 1");
  if (!(alpha_g > 0.0 && K_s > 0.0)) throw ConfigError("Gardner parameters must be > 0");
  if (!(theta_r >= 0.0 && theta_r < theta_s)) throw ConfigError("need theta_r < theta_s");
}

double TracyParams::beta() const {
  return std::sqrt(alpha_g * alpha_g / 4.0 + std::pow(M_PI / a, 2) + std::pow(M_PI / b, 2));
}

double TracyParams::d() const { return alpha_g * (theta_s - theta_r) / K_s; }

double tracy_boundary_head(const TracyParams& p, double x, double y) {
  const double h0 = 1.0 - std::exp(p.alpha_g * p.h_r);
  const double arg = std::exp(p.alpha_g * p.h_r) +
                     h0 * std::sin(M_PI * x / p.a) * std::sin(M_PI * y / p.b);
  return std::log(arg) / p.alpha_g;
}

namespace {

// sinh(beta z)/sinh(beta c) without overflow for large beta c.
double sinh_ratio(double beta, double z, double c) {
  return std::exp(beta * (z - c)) * (1.0 - std::exp(-2.0 * beta * z)) /
         (1.0 - std::exp(-2.0 * beta * c));
}

}  // namespace

double tracy_term_coefficient(const TracyParams& p, int k) {
  const double lam = k * M_PI / p.c;
  const double b2 = p.beta() * p.beta();
  if (p.variant == TracyParams::Variant::AsWritten) {
    const double gamma = (lam * lam + b2) / p.c;
    return lam / gamma;
  }
  const double gamma_k = (lam * lam + b2) / p.d();
  return lam / gamma_k;
}

double tracy_analytical(const TracyParams& p, double x, double y, double z, double t) {
  p.validate();
  const double beta = p.beta();
  const double d = p.d();
  const double h0 = 1.0 - std::exp(p.alpha_g * p.h_r);

  double sum = 0.0;
  const int K = p.series_terms;
  for (int k = 1; k <= K; ++k) {
    const double lam = k * M_PI / p.c;
    double ratio, decay;
    if (p.variant == TracyParams::Variant::AsWritten) {
      const double gamma = (lam * lam + beta * beta) / p.c;
      ratio = lam / gamma;
      decay = gamma / d;  // r = gamma/d, the dimensional patch of the text's r
    } else {
      const double gamma_k = (lam * lam + beta * beta) / d;
      ratio = lam / gamma_k;
      decay = gamma_k;
    }
    double sigma = 1.0;
    if (p.sigma_smoothing) {
      const double u = k * M_PI / (K + 1);
      sigma = std::sin(u) / u;
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sigma * sign * ratio * std::sin(lam * z) * std::exp(-decay * t);
  }

  double prefactor;
  if (p.variant == TracyParams::Variant::AsWritten) {
    prefactor = z != 0.0 ? 2.0 / (z * d) : 0.0;  // sum vanishes at z = 0 anyway
  } else {
    prefactor = 2.0 / (p.c * d);
  }
  const double bracket = sinh_ratio(beta, z, p.c) + prefactor * sum;
  const double arg = std::exp(p.alpha_g * p.h_r) +
                     h0 * std::sin(M_PI * x / p.a) * std::sin(M_PI * y / p.b) *
                         std::exp(p.alpha_g * (p.c - z) / 2.0) * bracket;
  return std::log(std::max(arg, 1e-300)) / p.alpha_g;
}

}  // namespace drw
