#include "drw/lscheme.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace drw {

void LschemeConfig::validate() const {
  if (!(L0 > 0.0)) throw ConfigError("L0 must be > 0");
  if (!(tol > 0.0 && tol <= rho)) throw ConfigError("need 0 < tol <= rho");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cond_threshold > 1.0)) throw ConfigError("cond_threshold must be > 1");
  if (!(cond_growth > 1.0)) throw ConfigError("cond_growth must be > 1");
}

BoundaryValues boundary_values(const Problem& p, double t) {
  const std::size_t nb = p.grid.boundary.size();
  BoundaryValues bv;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bv.psi.assign(nb, nan);
  bv.value.assign(nb, nan);
  bv.influx.assign(nb, 0.0);
  for (std::size_t s = 0; s < nb; ++s) {
    const BoundarySlot& slot = p.grid.boundary[s];
    if (const auto* d = std::get_if<DirichletBC>(&p.bc[s])) {
      bv.psi[s] = d->psi(t, slot.face_center);
      bv.value[s] = bv.psi[s];
    } else if (const auto* f = std::get_if<FluxBC>(&p.bc[s])) {
      bv.influx[s] = f->influx(t);
    }
  }
  return bv;
}

namespace {

// z_hat . n_hat of a face: +-1 on the vertical axis, 0 elsewhere.
double face_zn(const Grid& g, const Face& f) {
  return f.axis == g.vertical_axis ? static_cast<double>(f.sign) : 0.0;
}

}  // namespace

FluxAssembly assemble_fluxes(const Problem& p, const Eigen::VectorXd& psi_cells,
                             const Eigen::VectorXd& val_cells, const BoundaryValues& bv) {
  const Grid& g = p.grid;
  const int n = g.num_cells();
  FluxAssembly out;
  out.pair = Eigen::VectorXd::Zero(n);
  out.rest = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd K(n);
  for (int i = 0; i < n; ++i) K[i] = p.conductivity(i, psi_cells[i]);

  for (int i = 0; i < n; ++i) {
    const double z_i = g.elevation[i];
    const double h_i = psi_cells[i] + z_i;
    for (const Face& f : g.faces(i)) {
      if (!f.is_boundary()) {
        const int j = f.neighbor;
        const double h_j = psi_cells[j] + g.elevation[j];
        const double kf = p.face_K(i, j, K[i], K[j], h_i, h_j);
        const double coeff = kf * f.metric * f.area / f.dist;
        out.pair[i] += coeff * (val_cells[j] - val_cells[i]);
        out.rest[i] += coeff * (f.z_other - z_i);
      } else {
        const int s = f.boundary_slot();
        const BoundaryCondition& bc = p.bc[s];
        if (std::holds_alternative<DirichletBC>(bc)) {
          const double psi_b = bv.psi[s];
          const double kb = p.conductivity(i, psi_b);
          const double kf = p.face_K(i, i, K[i], kb, h_i, psi_b + f.z_other);
          const double coeff = kf * f.metric * f.area / f.dist;
          out.pair[i] += coeff * (bv.value[s] - val_cells[i]);
          out.rest[i] += coeff * (f.z_other - z_i);
        } else if (const auto* hg = std::get_if<HeadGradientBC>(&bc)) {
          const double zn = face_zn(g, f);
          out.rest[i] += K[i] * (hg->dpsi_dn + zn) * f.area;
        } else {
          out.rest[i] += bv.influx[s] * f.area;
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd residual_g(const Problem& p, const FieldState& s, const FieldState& prev,
                           double t, double dt) {
  const BoundaryValues bv = boundary_values(p, t);
  FluxAssembly fa = assemble_fluxes(p, s.psi, s.psi, bv);
  const int n = p.grid.num_cells();
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const double storage = (s.theta[i] - prev.theta[i]) / dt + p.sink_rate(i, s.psi[i]);
    g[i] = fa.pair[i] + fa.rest[i] - storage * p.grid.volume[i];
  }
  return g;
}

Eigen::VectorXd choose_linearization(const Eigen::VectorXd& g, const Eigen::VectorXd& psi,
                                     const LschemeConfig& cfg, double L0_effective) {
  Eigen::VectorXd L(g.size());
  const double factor = (1.0 + cfg.rho) / cfg.rho;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double denom = std::max(std::abs(psi[i]), cfg.eps_psi);
    L[i] = std::max(L0_effective, factor * std::abs(g[i]) / denom);
  }
  return L;
}

FieldState lscheme_sweep(const Problem& p, const FieldState& s, const FieldState& prev,
                         double t, double dt) {
  const Eigen::VectorXd g = residual_g(p, s, prev, t, dt);
  FieldState next = s;
  next.iterate = s.iterate + 1;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    next.psi[i] = s.psi[i] + g[i] / s.L[i];
    if (!std::isfinite(next.psi[i])) {
      throw SolverError("non-finite head update in cell " + std::to_string(i) +
                        " at iterate " + std::to_string(next.iterate));
    }
    next.theta[i] = p.theta(i, next.psi[i]);
  }
  return next;
}

Eigen::MatrixXd assemble_system_matrix(const Problem& p, const FieldState& s,
                                       const BoundaryValues& bv, double dt) {
  const Grid& g = p.grid;
  const int n = g.num_cells();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd K(n);
  for (int i = 0; i < n; ++i) K[i] = p.conductivity(i, s.psi[i]);

  for (int i = 0; i < n; ++i) {
    A(i, i) = s.L[i];
    const double h_i = s.psi[i] + g.elevation[i];
    const double scale = dt / g.volume[i];
    for (const Face& f : g.faces(i)) {
      if (!f.is_boundary()) {
        const int j = f.neighbor;
        const double kf =
            p.face_K(i, j, K[i], K[j], h_i, s.psi[j] + g.elevation[j]);
        const double coeff = scale * kf * f.metric * f.area / f.dist;
        A(i, i) += coeff;
        A(i, j) -= coeff;
      } else if (std::holds_alternative<DirichletBC>(p.bc[f.boundary_slot()])) {
        const double psi_b = bv.psi[f.boundary_slot()];
        const double kb = p.conductivity(i, psi_b);
        const double kf = p.face_K(i, i, K[i], kb, h_i, psi_b + f.z_other);
        A(i, i) += scale * kf * f.metric * f.area / f.dist;
      }
    }
  }
  return A;
}

double condition_number(const Eigen::MatrixXd& A) {
  if (A.size() == 0) throw ConfigError("condition number of an empty matrix");
  Eigen::VectorXd sv;
  if (A.rows() <= 96) {
    sv = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues();
  } else {
    sv = Eigen::BDCSVD<Eigen::MatrixXd>(A).singularValues();
  }
  const double smax = sv.maxCoeff();
  const double smin = sv.minCoeff();
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

FieldState solve_timestep(const Problem& p, const FieldState& prev, const LschemeConfig& cfg,
                          double dt, double t_next, double& L0_effective, StepReport& report) {
  const int n = p.grid.num_cells();
  const BoundaryValues bv = boundary_values(p, t_next);

  FieldState state = prev;  // warm start psi^{m+1,0} = psi^m
  state.time_index = prev.time_index + 1;
  state.iterate = 0;
  report.time = t_next;
  report.time_index = state.time_index;

  std::vector<int> last_exceed(n, 0);
  std::vector<double> max_re_seq;
  report.sweeps = 0;
  report.converged = false;

  // Conditioning is checked once per step at the first iterate; the cost of
  // an SVD every sweep is not justified since kappa moves slowly in-step.
  const bool check_cond =
      cfg.cond_check_every > 0 && (state.time_index - 1) % cfg.cond_check_every == 0;

  for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    Eigen::VectorXd g = residual_g(p, state, prev, t_next, dt);
    if (cfg.adaptive) {
      state.L = choose_linearization(g, state.psi, cfg, L0_effective);
      if (check_cond && sweep == 1) {
        Eigen::MatrixXd A = assemble_system_matrix(p, state, bv, dt);
        double kappa = condition_number(A);
        int doublings = 0;
        while (kappa > cfg.cond_threshold && doublings < cfg.cond_max_doublings) {
          L0_effective *= cfg.cond_growth;
          ++doublings;
          state.L = choose_linearization(g, state.psi, cfg, L0_effective);
          A = assemble_system_matrix(p, state, bv, dt);
          kappa = condition_number(A);
        }
        report.kappa = kappa;
      }
    } else {
      state.L.setConstant(n, cfg.static_L);
      if (check_cond && sweep == 1) {
        Eigen::MatrixXd A = assemble_system_matrix(p, state, bv, dt);
        report.kappa = condition_number(A);
      }
    }

    FieldState next = state;
    next.iterate = state.iterate + 1;
    double max_re = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dpsi = g[i] / state.L[i];
      next.psi[i] = state.psi[i] + dpsi;
      if (!std::isfinite(next.psi[i])) {
        throw SolverError("non-finite head update in cell " + std::to_string(i) +
                          " at iterate " + std::to_string(next.iterate) + " of step " +
                          std::to_string(state.time_index));
      }
      next.theta[i] = p.theta(i, next.psi[i]);
      const double re = std::abs(dpsi) / std::max(std::abs(state.psi[i]), cfg.eps_psi);
      if (cfg.adaptive) {
        const double bound = cfg.rho * std::abs(state.psi[i]) + (1.0 + cfg.rho) * cfg.eps_psi;
        if (std::abs(dpsi) > bound * (1.0 + 1e-12)) report.update_bound_violated = true;
      }
      if (re > cfg.tol) last_exceed[i] = sweep;
      max_re = std::max(max_re, re);
    }
    max_re_seq.push_back(max_re);
    state = std::move(next);
    report.sweeps = sweep;
    report.final_re = max_re;
    if (!cfg.fixed_iterations && max_re <= cfg.tol) {
      report.converged = true;
      break;
    }
  }
  if (cfg.fixed_iterations) report.converged = true;

  // Empirical contraction of iterates over the final 90% of the sweeps.
  const std::size_t start = max_re_seq.size() / 10;
  for (std::size_t k = start + 1; k < max_re_seq.size(); ++k) {
    if (max_re_seq[k] > max_re_seq[k - 1] * (1.0 + 1e-12)) {
      report.contraction_violated = true;
      break;
    }
  }

  double sum_iters = 0.0;
  for (int i = 0; i < n; ++i) sum_iters += std::max(last_exceed[i], 1);
  report.mean_cell_iters = sum_iters / n;
  report.L0_effective = L0_effective;
  return state;
}

double boundary_influx(const Problem& p, const Eigen::VectorXd& psi, double t,
                       std::map<std::string, double>* by_group) {
  const Grid& g = p.grid;
  const BoundaryValues bv = boundary_values(p, t);
  double total = 0.0;
  for (std::size_t s = 0; s < g.boundary.size(); ++s) {
    const BoundarySlot& slot = g.boundary[s];
    const Face& f = g.face[slot.face_index];
    const int i = slot.cell;
    double term = 0.0;
    if (std::holds_alternative<DirichletBC>(p.bc[s])) {
      const double K_i = p.conductivity(i, psi[i]);
      const double kb = p.conductivity(i, bv.psi[s]);
      const double h_i = psi[i] + g.elevation[i];
      const double kf = p.face_K(i, i, K_i, kb, h_i, bv.psi[s] + f.z_other);
      term = kf * (bv.psi[s] + f.z_other - psi[i] - g.elevation[i]) / f.dist * f.metric * f.area;
    } else if (const auto* hg = std::get_if<HeadGradientBC>(&p.bc[s])) {
      term = p.conductivity(i, psi[i]) * (hg->dpsi_dn + face_zn(g, f)) * f.area;
    } else {
      term = bv.influx[s] * f.area;
    }
    total += term;
    if (by_group) {
      const std::string key =
          "axis" + std::to_string(slot.axis) + (slot.sign > 0 ? "+" : "-");
      (*by_group)[key] += term;
    }
  }
  return total;
}

std::vector<double> face_fluxes(const Problem& p, const Eigen::VectorXd& psi, int cell, double t) {
  const Grid& g = p.grid;
  const BoundaryValues bv = boundary_values(p, t);
  const double K_i = p.conductivity(cell, psi[cell]);
  const double h_i = psi[cell] + g.elevation[cell];
  std::vector<double> q;
  for (const Face& f : g.faces(cell)) {
    if (!f.is_boundary()) {
      const int j = f.neighbor;
      const double K_j = p.conductivity(j, psi[j]);
      const double h_j = psi[j] + g.elevation[j];
      const double kf = p.face_K(cell, j, K_i, K_j, h_i, h_j);
      q.push_back(-kf * (h_j - h_i) / f.dist * f.metric);
    } else {
      const int s = f.boundary_slot();
      if (std::holds_alternative<DirichletBC>(p.bc[s])) {
        const double kb = p.conductivity(cell, bv.psi[s]);
        const double kf = p.face_K(cell, cell, K_i, kb, h_i, bv.psi[s] + f.z_other);
        q.push_back(-kf * (bv.psi[s] + f.z_other - h_i) / f.dist * f.metric);
      } else if (const auto* hg = std::get_if<HeadGradientBC>(&p.bc[s])) {
        q.push_back(-K_i * (hg->dpsi_dn + face_zn(g, f)));
      } else {
        q.push_back(-bv.influx[s]);
      }
    }
  }
  return q;
}

double SolveResult::average_kappa() const {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : steps) {
    if (std::isfinite(s.kappa)) {
      sum += s.kappa;
      ++count;
    }
  }
  return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

double SolveResult::average_cell_iterations() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.mean_cell_iters;
  return steps.empty() ? 0.0 : sum / steps.size();
}

bool SolveResult::all_converged() const {
  for (const auto& s : steps)
    if (!s.converged) return false;
  return true;
}

SolveResult solve_lscheme(const Problem& p, const LschemeConfig& cfg, const SolveOptions& opts) {
  p.validate();
  cfg.validate();
  const double dt = cfg.dt > 0.0 ? cfg.dt : p.dt;
  const int steps = static_cast<int>(std::ceil(p.total_time / dt - 1e-12));

  SolveResult res;
  res.L0_final = cfg.L0;
  FieldState state = make_initial_state(p);

  auto record = [&](const FieldState& s, double t) {
    res.times.push_back(t);
    std::map<std::string, double> groups;
    res.influx.push_back(boundary_influx(p, s.psi, t, &groups));
    res.influx_by_group.push_back(std::move(groups));
    if (opts.record_history) {
      res.psi_history.push_back(s.psi);
      res.theta_history.push_back(s.theta);
    }
  };
  record(state, 0.0);

  double L0_eff = cfg.L0;
  double t = 0.0;
  for (int m = 1; m <= steps; ++m) {
    const double dt_m = std::min(dt, p.total_time - t);
    StepReport rep;
    state = solve_timestep(p, state, cfg, dt_m, t + dt_m, L0_eff, rep);
    t += dt_m;
    res.steps.push_back(rep);
    record(state, t);
    for (int i = 0; i < p.grid.num_cells(); ++i) {
      res.sink_total += p.sink_rate(i, state.psi[i]) * p.grid.volume[i] * dt_m;
    }
  }
  res.final_state = state;
  res.L0_final = L0_eff;
  return res;
}

}  // namespace drw
