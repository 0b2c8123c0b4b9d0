#include <doctest.h>

#include <cmath>

#include "drw/soil.hpp"

using namespace drw;

namespace {

const HaverkampParams kCelia{0.00944, 0.287, 0.075, 1.175e6, 4.74, 1.611e6, 3.96};
const VanGenuchtenParams kLoam{2.89e-6, 0.43, 0.078, 3.6, 1.56};
const GardnerParams kTracy{1.1, 0.5, 0.0, 0.1};

// Independent long-double evaluation of the retention curves for the
// finite-difference oracle (keeps the cancellation error below the 1e-6
// relative gate).
long double theta_ld(const SoilModel& m, long double psi) {
  if (psi >= 0.0L) return std::visit([](const auto& p) { return (long double)p.theta_s; }, m);
  const long double h = -psi;
  if (const auto* p = std::get_if<HaverkampParams>(&m)) {
    return p->theta_r +
           p->alpha_h * (p->theta_s - p->theta_r) / (p->alpha_h + std::pow(h, (long double)p->beta_h));
  }
  if (const auto* p = std::get_if<VanGenuchtenParams>(&m)) {
    const long double mm = 1.0L - 1.0L / p->n_vg;
    return p->theta_r + (p->theta_s - p->theta_r) *
                            std::pow(1.0L + std::pow(p->alpha_vg * h, (long double)p->n_vg), -mm);
  }
  const auto& p = std::get<GardnerParams>(m);
  return p.theta_r + (p.theta_s - p.theta_r) * std::exp(p.alpha_g * psi);
}

double fd_capacity(const SoilModel& m, double psi) {
  const long double h = 1e-6L * std::max(1.0L, std::abs((long double)psi));
  return (double)((theta_ld(m, psi + h) - theta_ld(m, psi - h)) / (2.0L * h));
}

Rng& rng() {
  static Rng r(987654321);
  return r;
}

SoilModel random_model(int kind) {
  auto& g = rng();
  const double tr = 0.2 * g.uniform();
  const double ts = tr + 0.05 + 0.4 * g.uniform();
  const double ks = std::pow(10.0, -5.0 + 4.0 * g.uniform());
  switch (kind) {
    case 0:
      return HaverkampParams{ks, ts, tr, std::pow(10.0, 3.0 + 4.0 * g.uniform()),
                             1.5 + 4.0 * g.uniform(), std::pow(10.0, 3.0 + 4.0 * g.uniform()),
                             1.5 + 4.0 * g.uniform()};
    case 1:
      return VanGenuchtenParams{ks, ts, tr, std::pow(10.0, -2.0 + 2.5 * g.uniform()),
                                1.1 + 1.9 * g.uniform()};
    default:
      return GardnerParams{ks, ts, tr, std::pow(10.0, -3.0 + 2.5 * g.uniform())};
  }
}

}  // namespace

TEST_CASE("water content matches the closed forms") {
  // Saturation limit and the Table-2 suction value.
  CHECK(water_content(SoilModel{kCelia}, 0.0) == doctest::Approx(0.287).epsilon(1e-15));
  CHECK(water_content(SoilModel{kCelia}, -61.5) ==
        doctest::Approx(0.09985068294936962).epsilon(1e-12));
  CHECK(water_content(SoilModel{kLoam}, -10.0) ==
        doctest::Approx(0.12525330862273961).epsilon(1e-12));
  CHECK(water_content(SoilModel{kCelia}, 5.0) == doctest::Approx(0.287));  // clamped
}

TEST_CASE("hydraulic conductivity matches the closed forms") {
  CHECK(hydraulic_conductivity(SoilModel{kTracy}, 0.0) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(hydraulic_conductivity(SoilModel{kTracy}, -15.24) ==
        doctest::Approx(0.23962266544579637).epsilon(1e-12));
  CHECK(hydraulic_conductivity(SoilModel{kCelia}, 0.0) ==
        doctest::Approx(0.00944).epsilon(1e-15));
}

TEST_CASE("moisture capacity: closed form vs finite differences") {
  CHECK(moisture_capacity(SoilModel{kTracy}, -1.0).value ==
        doctest::Approx(0.045241870901797979).epsilon(1e-12));
  // Flattens towards theta_r.
  CHECK(moisture_capacity(SoilModel{kTracy}, -1e4).value < 1e-300);

  const double fd = fd_capacity(SoilModel{kCelia}, -40.0);
  const double cf = moisture_capacity(SoilModel{kCelia}, -40.0).value;
  CHECK(cf > 0.0);
  CHECK(std::abs(cf - fd) <= 1e-6 * std::max(std::abs(cf), std::abs(fd)));

  CHECK(moisture_capacity(SoilModel{kCelia}, 0.0).one_sided);
  CHECK_FALSE(moisture_capacity(SoilModel{kCelia}, -1.0).one_sided);
}

TEST_CASE("soil property suite: monotonicity, range, derivative consistency") {
  for (int kind = 0; kind < 3; ++kind) {
    for (int trial = 0; trial < 400; ++trial) {
      const SoilModel m = random_model(kind);
      validate(m);
      const double a = -std::pow(10.0, -3.0 + 6.0 * rng().uniform());
      const double b = a * (0.1 + 0.8 * rng().uniform());  // |b| < |a|, both negative
      const double ts = std::visit([](const auto& p) { return p.theta_s; }, m);
      const double trr = std::visit([](const auto& p) { return p.theta_r; }, m);
      const double ks = std::visit([](const auto& p) { return p.K_s; }, m);

      const double tha = water_content(m, a), thb = water_content(m, b);
      CHECK(tha <= thb + 1e-15);
      CHECK(tha >= trr - 1e-15);
      CHECK(thb <= ts + 1e-15);
      const double ka = hydraulic_conductivity(m, a), kb = hydraulic_conductivity(m, b);
      CHECK(ka <= kb * (1.0 + 1e-12));
      CHECK(ka > 0.0);
      CHECK(kb <= ks * (1.0 + 1e-12));

      const double cf = moisture_capacity(m, a).value;
      CHECK(cf >= 0.0);
      const double fd = fd_capacity(m, a);
      const double denom = std::max(std::abs(cf), std::abs(fd));
      if (denom > 1e-14) {
        CHECK(std::abs(cf - fd) <= 1e-6 * denom);
      }
    }
  }
}

TEST_CASE("capacity is strictly positive across the benchmark wet-to-dry ranges") {
  for (double psi = -61.5; psi <= -20.7; psi += 1.0) {
    CHECK(moisture_capacity(SoilModel{kCelia}, psi).value > 0.0);
  }
  for (double psi = -15.24; psi <= -0.1; psi += 0.5) {
    CHECK(moisture_capacity(SoilModel{kTracy}, psi).value > 0.0);
  }
  for (double psi = -1000.0; psi <= -20.0; psi += 25.0) {
    CHECK(moisture_capacity(SoilModel{kLoam}, psi).value > 0.0);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(SoilModel{HaverkampParams{-1, 0.3, 0.1, 1, 1, 1, 1}}), ConfigError);
  CHECK_THROWS_AS(validate(SoilModel{VanGenuchtenParams{1, 0.3, 0.1, 1, 0.9}}), ConfigError);
  CHECK_THROWS_AS(validate(SoilModel{GardnerParams{1, 0.1, 0.3, 1}}), ConfigError);
  CHECK_NOTHROW(validate(SoilModel{kCelia}));
}

TEST_CASE("Feddes sink ramp") {
  const FeddesParams fp{2.0, -0.1, -0.25, -5.0, -80.0};
  validate(fp);
  // Plateau.
  CHECK(feddes_sink(fp, 0.5 * (fp.psi_2 + fp.psi_3)) == doctest::Approx(2.0));
  // Wetter than the anaerobiosis point.
  CHECK(feddes_sink(fp, -0.05) == 0.0);
  CHECK(feddes_sink(fp, 0.0) == 0.0);
  // Midpoint of the dry ramp.
  CHECK(feddes_sink(fp, 0.5 * (fp.psi_4 + fp.psi_3)) == doctest::Approx(1.0));
  // Drier than wilting.
  CHECK(feddes_sink(fp, -100.0) == 0.0);
  // Ramp endpoints.
  CHECK(feddes_sink(fp, fp.psi_2) == doctest::Approx(2.0));
  CHECK(feddes_sink(fp, fp.psi_3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(validate(FeddesParams{1.0, -0.25, -0.1, -5.0, -80.0}), ConfigError);
}
