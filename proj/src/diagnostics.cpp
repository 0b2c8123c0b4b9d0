#include "drw/diagnostics.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace drw {

using json = nlohmann::json;

MassBalance mass_balance(const SolveResult& history, const Problem& p) {
  if (history.theta_history.size() < 2 || history.times.size() != history.theta_history.size()) {
    throw ConfigError("mass balance needs recorded theta history at t=0 and t=T");
  }
  MassBalance mb;
  const Eigen::VectorXd& th0 = history.theta_history.front();
  const Eigen::VectorXd& thT = history.theta_history.back();
  for (int i = 0; i < p.grid.num_cells(); ++i) {
    mb.additional_mass += (thT[i] - th0[i]) * p.grid.volume[i];
  }
  mb.additional_mass += history.sink_total;

  for (std::size_t k = 0; k + 1 < history.times.size(); ++k) {
    const double w = 0.5 * (history.times[k + 1] - history.times[k]);
    mb.influx_integral += w * (history.influx[k] + history.influx[k + 1]);
    for (const auto& [key, v] : history.influx_by_group[k]) {
      mb.influx_integral_by_group[key] += w * v;
    }
    for (const auto& [key, v] : history.influx_by_group[k + 1]) {
      mb.influx_integral_by_group[key] += w * v;
    }
  }

  const double eps = 1e-14;
  if (std::abs(mb.influx_integral) < eps) {
    if (std::abs(mb.additional_mass) < eps) {
      mb.no_flow = true;
      mb.percent = 100.0;
    } else {
      mb.indeterminate = true;
      mb.percent = std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    mb.percent = mb.additional_mass / mb.influx_integral * 100.0;
  }
  return mb;
}

MseResult mse_field(const Eigen::VectorXd& numerical, const Eigen::VectorXd& reference) {
  if (numerical.size() != reference.size())
    throw ConfigError("mse_field: fields must live on the same grid slice");
  MseResult r;
  r.rel_diff.resize(reference.size());
  for (Eigen::Index i = 0; i < reference.size(); ++i) {
    const double d = numerical[i] - reference[i];
    r.mse += d * d;
    if (reference[i] != 0.0) {
      r.rel_diff[i] = (reference[i] - numerical[i]) / reference[i];
    } else {
      r.rel_diff[i] = std::numeric_limits<double>::quiet_NaN();
      ++r.excluded;
    }
  }
  return r;
}

double symmetry_defect(const Grid& grid, const Eigen::VectorXd& field, int axis, double eps) {
  if (grid.coords != CoordinateSystem::Cartesian)
    throw ConfigError("symmetry_defect expects a Cartesian grid");
  if (axis < 0 || axis >= grid.dim) throw ConfigError("mirror axis out of range");
  if (field.size() != grid.num_cells())
    throw ConfigError("field does not match the grid");
  double defect = 0.0;
  const auto& npa = grid.cells_per_axis;
  for (int k = 0; k < npa[2]; ++k)
    for (int j = 0; j < npa[1]; ++j)
      for (int i = 0; i < npa[0]; ++i) {
        std::array<int, 3> idx{i, j, k};
        std::array<int, 3> mir = idx;
        mir[axis] = npa[axis] - 1 - idx[axis];
        const int a = grid.cell_index(idx[0], idx[1], idx[2]);
        const int b = grid.cell_index(mir[0], mir[1], mir[2]);
        const double denom = std::max(std::abs(field[a]), eps);
        defect = std::max(defect, std::abs(field[a] - field[b]) / denom);
      }
  return defect;
}

Eigen::VectorXd cell_flux_component(const Problem& p, const Eigen::VectorXd& psi, int axis,
                                    double t) {
  const int n = p.grid.num_cells();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const std::vector<double> fluxes = face_fluxes(p, psi, i, t);
    const auto faces = p.grid.faces(i);
    double acc = 0.0;
    int count = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (faces[f].axis != axis) continue;
      acc += faces[f].sign * fluxes[f];
      ++count;
    }
    q[i] = count ? acc / count : 0.0;
  }
  return q;
}

std::vector<int> plane_cells(const Grid& grid, int axis, double coordinate) {
  if (axis < 0 || axis >= grid.dim) throw ConfigError("plane axis out of range");
  const double step = grid.step[axis];
  int plane = static_cast<int>(std::floor(coordinate / step));
  plane = std::clamp(plane, 0, grid.cells_per_axis[axis] - 1);
  // Snap to the nearest cell-center plane.
  const double below = (plane + 0.5) * step;
  if (plane + 1 < grid.cells_per_axis[axis] &&
      std::abs((plane + 1.5) * step - coordinate) < std::abs(below - coordinate)) {
    ++plane;
  }
  std::vector<int> cells;
  const auto& npa = grid.cells_per_axis;
  for (int k = 0; k < npa[2]; ++k)
    for (int j = 0; j < npa[1]; ++j)
      for (int i = 0; i < npa[0]; ++i) {
        const std::array<int, 3> idx{i, j, k};
        if (idx[axis] == plane) cells.push_back(grid.cell_index(i, j, k));
      }
  return cells;
}

RunReport summarize(const SolveResult& result, const Problem& p, const std::string& solver) {
  RunReport r;
  r.problem = p.name;
  r.solver = solver;
  r.unit_system = to_string(p.units);
  r.steps = static_cast<int>(result.steps.size());
  r.all_converged = result.all_converged();
  r.avg_cell_iterations = result.average_cell_iterations();
  r.avg_kappa = result.average_kappa();
  r.L0_final = result.L0_final;
  double sweeps = 0.0, re = 0.0;
  for (const auto& s : result.steps) {
    sweeps += s.sweeps;
    re += s.final_re;
    r.total_clamped += s.clamped_cells;
    r.total_extrapolations += s.extrapolations;
  }
  if (!result.steps.empty()) {
    r.avg_sweeps = sweeps / result.steps.size();
    r.avg_final_re = re / result.steps.size();
  }
  if (result.theta_history.size() >= 2) {
    r.mb = mass_balance(result, p);
  }
  return r;
}

std::string RunReport::to_json() const {
  json j;
  j["schema"] = "drw-report-1";
  j["problem"] = problem;
  j["solver"] = solver;
  j["unit_system"] = unit_system;
  j["seed"] = seed;
  j["config_digest"] = config_digest;
  j["steps"] = steps;
  j["all_converged"] = all_converged;
  j["avg_cell_iterations"] = avg_cell_iterations;
  j["avg_sweeps"] = avg_sweeps;
  j["avg_final_re"] = avg_final_re;
  if (std::isfinite(avg_kappa)) j["avg_kappa"] = avg_kappa;
  j["L0_final"] = L0_final;
  j["total_clamped"] = total_clamped;
  j["total_extrapolations"] = total_extrapolations;
  j["wall_seconds"] = wall_seconds;
  if (mb) {
    j["mass_balance"] = {{"percent", mb->percent},
                         {"indeterminate", mb->indeterminate},
                         {"no_flow", mb->no_flow},
                         {"additional_mass", mb->additional_mass},
                         {"influx_integral", mb->influx_integral}};
    for (const auto& [k, v] : mb->influx_integral_by_group)
      j["mass_balance"]["influx_by_group"][k] = v;
  }
  for (const auto& [k, v] : mse) j["mse"][k] = v;
  for (const auto& [k, v] : extra) j["extra"][k] = v;
  return j.dump(2);
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << report.to_json() << "\n";
  if (!out) throw IoError("short write on report: " + path);
}

RunReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read report: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("corrupt report " + path + ": " + e.what());
  }
  RunReport r;
  r.problem = j.value("problem", "");
  r.solver = j.value("solver", "");
  r.unit_system = j.value("unit_system", "cm-s");
  r.seed = j.value("seed", 0ull);
  r.config_digest = j.value("config_digest", "");
  r.steps = j.value("steps", 0);
  r.all_converged = j.value("all_converged", true);
  r.avg_cell_iterations = j.value("avg_cell_iterations", 0.0);
  r.avg_sweeps = j.value("avg_sweeps", 0.0);
  r.avg_final_re = j.value("avg_final_re", 0.0);
  r.avg_kappa = j.value("avg_kappa", std::numeric_limits<double>::quiet_NaN());
  r.L0_final = j.value("L0_final", 0.0);
  r.total_clamped = j.value("total_clamped", 0);
  r.total_extrapolations = j.value("total_extrapolations", 0);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("mass_balance")) {
    MassBalance mb;
    mb.percent = j["mass_balance"].value("percent", 0.0);
    mb.indeterminate = j["mass_balance"].value("indeterminate", false);
    mb.no_flow = j["mass_balance"].value("no_flow", false);
    mb.additional_mass = j["mass_balance"].value("additional_mass", 0.0);
    mb.influx_integral = j["mass_balance"].value("influx_integral", 0.0);
    r.mb = mb;
  }
  if (j.contains("mse"))
    for (auto& [k, v] : j["mse"].items()) r.mse[k] = v.get<double>();
  if (j.contains("extra"))
    for (auto& [k, v] : j["extra"].items()) r.extra[k] = v.get<double>();
  return r;
}

}  // namespace drw
