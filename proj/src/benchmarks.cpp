#include "drw/benchmarks.hpp"

#include <algorithm>
#include <cmath>

namespace drw {

void IrrigationSchedule::validate() const {
  for (const auto& e : events) {
    if (!(e.duration > 0.0) || e.depth < 0.0 || e.start < 0.0)
      throw ConfigError("irrigation events need start >= 0, duration > 0, depth >= 0");
  }
  std::vector<IrrigationEvent> sorted = events;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start < sorted[i - 1].start + sorted[i - 1].duration)
      throw ConfigError("irrigation events must not overlap");
  }
}

double irrigation_flux(const IrrigationSchedule& schedule, double t) {
  for (const auto& e : schedule.events) {
    if (t >= e.start && t < e.start + e.duration) return e.depth / e.duration;
  }
  return 0.0;
}

IrrigationSchedule default_irrigation_schedule() {
  // Day 15: 1.81 mm; day 30: 1.58 mm; both spread over a full day.
  return {{{14.0 * 86400.0, 86400.0, 1.81e-3}, {29.0 * 86400.0, 86400.0, 1.58e-3}}};
}

namespace {

SoilModel celia_soil() {
  return HaverkampParams{0.00944, 0.287, 0.075, 1.175e6, 4.74, 1.611e6, 3.96};
}

Problem column_problem(std::string name, UnitSystem units, double depth, int cells,
                       SoilModel soil, double psi0, double psi_bottom, double psi_top,
                       double dt, double total_time) {
  Problem p;
  p.name = std::move(name);
  p.units = units;
  p.grid = build_cartesian_grid({depth}, {cells});
  p.soils = {std::move(soil)};
  p.soil_of_cell.assign(p.grid.num_cells(), 0);
  p.initial_psi = [psi0](const Vec3&) { return psi0; };
  p.dt = dt;
  p.total_time = total_time;
  p.bc.resize(p.grid.boundary.size());
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    const double v = p.grid.boundary[s].sign < 0 ? psi_bottom : psi_top;
    p.bc[s] = DirichletBC{[v](double, const Vec3&) { return v; }};
  }
  return p;
}

}  // namespace

Problem celia_problem(int cells, double dt, double total_time) {
  return column_problem("celia_1d", UnitSystem::CmSeconds, 40.0, cells, celia_soil(), -61.5,
                        -61.5, -20.7, dt, total_time);
}

Problem celia_coarse_problem() { return celia_problem(40, 1.0, 40.0); }

Problem hills_problem(int cells, double dt, double total_time) {
  // Berino loamy fine sand over Glendale clay loam; K_s given in cm/day.
  const SoilModel berino = VanGenuchtenParams{541.0 / 86400.0, 0.366, 0.029, 0.028, 2.239};
  const SoilModel glendale = VanGenuchtenParams{13.10 / 86400.0, 0.469, 0.106, 0.010, 1.395};
  Problem p;
  p.name = "hills_layered_1d";
  p.units = UnitSystem::CmSeconds;
  p.grid = build_cartesian_grid({60.0}, {cells});
  p.soils = {berino, glendale};
  p.soil_of_cell.resize(p.grid.num_cells());
  for (int i = 0; i < p.grid.num_cells(); ++i) {
    p.soil_of_cell[i] = p.grid.center[i][0] > 30.0 ? 0 : 1;  // Berino on top
  }
  p.initial_psi = [](const Vec3&) { return -1000.0; };
  p.dt = dt;
  p.total_time = total_time;
  p.bc.resize(p.grid.boundary.size());
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    if (p.grid.boundary[s].sign > 0) {
      p.bc[s] = DirichletBC{[](double, const Vec3&) { return -20.0; }};
    } else {
      p.bc[s] = HeadGradientBC{0.0};  // free drainage
    }
  }
  return p;
}

Problem infiltration2d_problem(int nx, int nz, double dt, double total_time) {
  Problem p;
  p.name = "infiltration_2d";
  p.units = UnitSystem::MSeconds;
  p.grid = build_cartesian_grid({1.0, 1.0}, {nx, nz});
  p.soils = {VanGenuchtenParams{2.89e-6, 0.43, 0.078, 3.6, 1.56}};
  p.soil_of_cell.assign(p.grid.num_cells(), 0);
  p.initial_psi = [](const Vec3&) { return -10.0; };
  p.dt = dt;
  p.total_time = total_time;
  p.bc.resize(p.grid.boundary.size());
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    const BoundarySlot& slot = p.grid.boundary[s];
    const bool strip = slot.axis == 1 && slot.sign > 0 && slot.face_center[0] >= 0.46 &&
                       slot.face_center[0] <= 0.54;
    if (strip) {
      p.bc[s] = DirichletBC{[](double, const Vec3&) { return 0.0; }};
    } else {
      p.bc[s] = FluxBC{[](double) { return 0.0; }};  // "no slip" read as zero flux
    }
  }
  return p;
}

Problem tracy_problem(const TracyParams& params, int nx, int ny, int nz, double dt,
                      double total_time) {
  params.validate();
  Problem p;
  p.name = "tracy_3d";
  p.units = UnitSystem::MSeconds;
  p.grid = build_cartesian_grid({params.a, params.b, params.c}, {nx, ny, nz});
  // Gardner closes both curves here; it is the pair the analytical solution
  // is exact for (see README on the retention-curve choice).
  p.soils = {GardnerParams{params.K_s, params.theta_s, params.theta_r, params.alpha_g}};
  p.soil_of_cell.assign(p.grid.num_cells(), 0);
  const double h_r = params.h_r;
  p.initial_psi = [h_r](const Vec3&) { return h_r; };
  p.dt = dt;
  p.total_time = total_time;
  p.bc.resize(p.grid.boundary.size());
  const TracyParams tp = params;
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    const BoundarySlot& slot = p.grid.boundary[s];
    if (slot.axis == 2 && slot.sign > 0) {
      p.bc[s] = DirichletBC{[tp](double, const Vec3& xc) {
        return tracy_boundary_head(tp, xc[0], xc[1]);
      }};
    } else {
      p.bc[s] = DirichletBC{[h_r](double, const Vec3&) { return h_r; }};
    }
  }
  return p;
}

Problem cylindrical_field_problem(int n_r, int n_az, int n_z, double dt, double total_time,
                                  IrrigationSchedule schedule, double h_r) {
  schedule.validate();
  Problem p;
  p.name = "cylindrical_field";
  p.units = UnitSystem::MSeconds;
  p.grid = build_cylindrical_grid(0.1, 0.25, n_r, n_az, n_z);
  p.soils = {VanGenuchtenParams{2.89e-6, 0.43, 0.078, 3.6, 1.56}};  // loam
  p.soil_of_cell.assign(p.grid.num_cells(), 0);
  p.initial_psi = [h_r](const Vec3&) { return h_r; };
  p.sink = FeddesParams{2e-8, -0.1, -0.25, -5.0, -80.0};
  p.dt = dt;
  p.total_time = total_time;
  p.bc.resize(p.grid.boundary.size());
  for (std::size_t s = 0; s < p.grid.boundary.size(); ++s) {
    const BoundarySlot& slot = p.grid.boundary[s];
    if (slot.axis == 2 && slot.sign > 0) {
      IrrigationSchedule sched = schedule;
      p.bc[s] = FluxBC{[sched](double t) { return irrigation_flux(sched, t); }};
    } else {
      // r = 0 (zero-area axis face), r = R, and the bottom: dpsi/dn = 0.
      p.bc[s] = HeadGradientBC{0.0};
    }
  }
  return p;
}

Problem load_problem(const std::string& name) {
  if (name == "celia_1d") return celia_problem();
  if (name == "celia_1d_coarse") return celia_coarse_problem();
  if (name == "hills_layered_1d") return hills_problem();
  if (name == "infiltration_2d") return infiltration2d_problem();
  if (name == "tracy_3d") return tracy_problem();
  if (name == "cylindrical_field") return cylindrical_field_problem();
  throw ConfigError("unknown benchmark '" + name + "'; expected one of: celia_1d, " +
                    "celia_1d_coarse, hills_layered_1d, infiltration_2d, tracy_3d, " +
                    "cylindrical_field");
}

std::vector<std::string> benchmark_names() {
  return {"celia_1d", "celia_1d_coarse", "hills_layered_1d", "infiltration_2d", "tracy_3d",
          "cylindrical_field"};
}

}  // namespace drw
