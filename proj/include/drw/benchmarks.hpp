#pragma once

#include "drw/problem.hpp"
#include "drw/tracy.hpp"

namespace drw {

/// One irrigation application: `depth` of water spread over `duration`
/// starting at `start` (all in problem units).
struct IrrigationEvent {
  double start;
  double duration;
  double depth;
};

struct IrrigationSchedule {
  std::vector<IrrigationEvent> events;
  void validate() const;
};

/// Instantaneous irrigation rate u_irr(t) = depth / duration inside an event,
/// zero otherwise.
double irrigation_flux(const IrrigationSchedule& schedule, double t);

/// The 40-cm Haverkamp column: psi(0,t) = -61.5 cm, psi(40,t) = -20.7 cm,
/// psi0 = -61.5 cm. The paper's "101 mesh points" maps to 100 cells plus the
/// two boundary faces.
Problem celia_problem(int cells = 100, double dt = 1.0, double total_time = 360.0);

/// Coarse reference-generation variant: 40 cells, 40 s.
Problem celia_coarse_problem();

/// Two 30-cm Mualem-van Genuchten layers (Berino loamy fine sand over
/// Glendale clay loam), very dry start, wet top boundary, free drainage
/// below. cm-s units with the cm/day conductivities converted.
Problem hills_problem(int cells = 60, double dt = 1.0, double total_time = 450.0);

/// 1m x 1m loam slab with a saturated strip source on the top boundary
/// (x in [0.46, 0.54] m) and sealed ("no slip" = zero-flux) boundaries
/// elsewhere; psi0 = -10 m.
Problem infiltration2d_problem(int nx = 50, int nz = 50, double dt = 10.0,
                               double total_time = 1.26e4);

/// The Gardner cuboid with the sinusoidal top head and h_r on the other
/// boundaries; the analytical oracle lives in tracy.hpp.
Problem tracy_problem(const TracyParams& params = {}, int nx = 11, int ny = 11, int nz = 11,
                      double dt = 4320.0, double total_time = 86400.0);

/// Cylindrical field plot (radius 0.1 m, depth 0.25 m) with a Feddes sink,
/// free drainage below and a schedule-driven irrigation flux on top.
/// Azimuthal direction is periodic.
Problem cylindrical_field_problem(int n_r = 6, int n_az = 40, int n_z = 22, double dt = 5400.0,
                                  double total_time = 35.0 * 86400.0,
                                  IrrigationSchedule schedule = default_irrigation_schedule(),
                                  double h_r = -2.0);

/// The two §-scale applications: 1.81 mm on day 15 and 1.58 mm on day 30,
/// each spread over 86,400 s.
IrrigationSchedule default_irrigation_schedule();

/// Named benchmark lookup: celia_1d | hills_layered_1d | infiltration_2d |
/// tracy_3d | cylindrical_field. Throws ConfigError for unknown names.
Problem load_problem(const std::string& name);

std::vector<std::string> benchmark_names();

}  // namespace drw
