#pragma once

#include <map>
#include <optional>
#include <string>

#include "drw/lscheme.hpp"

namespace drw {

/// Mass-balance measure: domain moisture gain (plus sink extraction) over the
/// time-integrated net boundary influx, as a percentage. The influx integral
/// uses the trapezoid rule on the solve's own time levels.
struct MassBalance {
  double percent = 0.0;
  bool indeterminate = false;  // influx ~ 0 but storage changed
  bool no_flow = false;        // 0/0 equilibrium, reported as 100%
  double additional_mass = 0.0;
  double influx_integral = 0.0;
  std::map<std::string, double> influx_integral_by_group;
};

MassBalance mass_balance(const SolveResult& history, const Problem& p);

/// Absolute squared error summed over cells, plus the per-cell relative
/// difference (reference - numerical)/reference. Cells with zero reference
/// are excluded from the relative field and counted.
struct MseResult {
  double mse = 0.0;
  Eigen::VectorXd rel_diff;
  int excluded = 0;
};

MseResult mse_field(const Eigen::VectorXd& numerical, const Eigen::VectorXd& reference);

/// Max over mirrored cell pairs of |f(p) - f(mirror p)| / max(|f(p)|, eps).
/// The grid must have an even-symmetric cell layout along `axis`.
double symmetry_defect(const Grid& grid, const Eigen::VectorXd& field, int axis,
                       double eps = 1e-12);

/// Cell-centered flux component along `axis` (mean of the two face normal
/// fluxes, oriented along +axis).
Eigen::VectorXd cell_flux_component(const Problem& p, const Eigen::VectorXd& psi, int axis,
                                    double t);

/// Cells of the axis-2 (or axis-1 in 2-D) plane nearest to the given
/// coordinate; returns cell indices in grid order.
std::vector<int> plane_cells(const Grid& grid, int axis, double coordinate);

/// Summary document for a completed solve.
struct RunReport {
  std::string problem;
  std::string solver;
  std::string unit_system;
  std::uint64_t seed = 0;
  std::string config_digest;
  int steps = 0;
  bool all_converged = true;
  double avg_cell_iterations = 0.0;  // averaged over cells and steps
  double avg_sweeps = 0.0;           // global sweeps per step
  double avg_final_re = 0.0;
  double avg_kappa = std::numeric_limits<double>::quiet_NaN();
  double L0_final = 0.0;
  int total_clamped = 0;
  int total_extrapolations = 0;
  std::optional<MassBalance> mb;
  std::map<std::string, double> mse;  // per reference label
  std::map<std::string, double> extra;
  double wall_seconds = 0.0;

  std::string to_json() const;
};

RunReport summarize(const SolveResult& result, const Problem& p, const std::string& solver);

void write_report(const RunReport& report, const std::string& path);
RunReport read_report(const std::string& path);

}  // namespace drw
