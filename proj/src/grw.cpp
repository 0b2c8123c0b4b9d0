#include "drw/grw.hpp"

#include <cmath>

namespace drw {

double head_to_particles(double psi, const ParticleScale& scale, bool* flagged) {
  scale.validate();
  if (flagged) *flagged = psi > 0.0;
  return std::round(scale.per_unit_head * std::abs(psi));
}

double particles_to_head(double n, const ParticleScale& scale) {
  scale.validate();
  return -n / scale.per_unit_head;
}

Eigen::VectorXd relative_error(const Eigen::VectorXd& n_prev_iter,
                               const Eigen::VectorXd& n_next_iter, double guard) {
  Eigen::VectorXd re(n_next_iter.size());
  for (Eigen::Index i = 0; i < re.size(); ++i) {
    const double denom = n_next_iter[i] != 0.0 ? std::abs(n_next_iter[i]) : guard;
    re[i] = std::abs((n_next_iter[i] - n_prev_iter[i]) / denom);
  }
  return re;
}

void GrwConfig::validate() const {
  if (!(static_L > 0.0)) throw ConfigError("static_L must be > 0");
  scale.validate();
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
}

namespace {

// Particle-space boundary data: Dirichlet ghost heads pass through the
// rounded linear ingestion map.
BoundaryValues particle_boundary_values(const Problem& p, double t, const ParticleScale& scale) {
  BoundaryValues bv = boundary_values(p, t);
  for (std::size_t s = 0; s < bv.psi.size(); ++s) {
    if (std::isfinite(bv.psi[s])) bv.value[s] = head_to_particles(bv.psi[s], scale);
  }
  return bv;
}

}  // namespace

FieldState grw_sweep(const Problem& p, const FieldState& s, const FieldState& prev, double t,
                     double dt, const GrwConfig& cfg, int* clamped) {
  const int n = p.grid.num_cells();
  const double scale = cfg.scale.per_unit_head;
  Eigen::VectorXd psi_dec(n);
  for (int i = 0; i < n; ++i) psi_dec[i] = particles_to_head(s.n[i], cfg.scale);

  const BoundaryValues bv = particle_boundary_values(p, t, cfg.scale);
  const FluxAssembly fa = assemble_fluxes(p, psi_dec, s.n, bv);

  FieldState next = s;
  next.iterate = s.iterate + 1;
  int clamps = 0;
  for (int i = 0; i < n; ++i) {
    const double theta_i = p.theta(i, psi_dec[i]);
    const double storage = (theta_i - prev.theta[i]) / dt + p.sink_rate(i, psi_dec[i]);
    const double J = (fa.rest[i] - storage * p.grid.volume[i]) / cfg.static_L;
    double val = s.n[i] + fa.pair[i] / cfg.static_L + (-scale) * J;
    if (!std::isfinite(val)) {
      throw SolverError("non-finite particle update in cell " + std::to_string(i) +
                        " at iterate " + std::to_string(next.iterate));
    }
    if (val < 0.0) {
      val = 0.0;
      ++clamps;
    }
    next.n[i] = val;
    next.psi[i] = particles_to_head(val, cfg.scale);
    next.theta[i] = p.theta(i, next.psi[i]);
  }
  if (clamped) *clamped = clamps;
  return next;
}

SolveResult solve_grw(const Problem& p, const GrwConfig& cfg, const SolveOptions& opts) {
  p.validate();
  cfg.validate();
  const double dt = cfg.dt > 0.0 ? cfg.dt : p.dt;
  const int steps = static_cast<int>(std::ceil(p.total_time / dt - 1e-12));
  const int n = p.grid.num_cells();

  SolveResult res;
  FieldState state = make_initial_state(p);
  state.n.resize(n);
  for (int i = 0; i < n; ++i) state.n[i] = head_to_particles(state.psi[i], cfg.scale);
  state.psi = -state.n / cfg.scale.per_unit_head;  // counts are authoritative after ingestion
  for (int i = 0; i < n; ++i) state.theta[i] = p.theta(i, state.psi[i]);
  state.L = Eigen::VectorXd::Constant(n, cfg.static_L);

  auto record = [&](const FieldState& s, double t) {
    res.times.push_back(t);
    std::map<std::string, double> groups;
    res.influx.push_back(boundary_influx(p, s.psi, t, &groups));
    res.influx_by_group.push_back(std::move(groups));
    if (opts.record_history) {
      res.psi_history.push_back(s.psi);
      res.theta_history.push_back(s.theta);
      res.n_history.push_back(s.n);
    }
  };
  record(state, 0.0);

  double t = 0.0;
  for (int m = 1; m <= steps; ++m) {
    const double dt_m = std::min(dt, p.total_time - t);
    const double t_next = t + dt_m;
    StepReport rep;
    rep.time_index = m;
    rep.time = t_next;
    rep.L0_effective = cfg.static_L;

    const FieldState prev = state;
    FieldState iter = prev;
    iter.time_index = m;
    iter.iterate = 0;
    std::vector<int> last_exceed(n, 0);
    for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
      if (cfg.cond_check_every > 0 && sweep == 1 && (m - 1) % cfg.cond_check_every == 0) {
        const BoundaryValues bv = boundary_values(p, t_next);
        rep.kappa = condition_number(assemble_system_matrix(p, iter, bv, dt_m));
      }
      int clamps = 0;
      FieldState next = grw_sweep(p, iter, prev, t_next, dt_m, cfg, &clamps);
      rep.clamped_cells += clamps;
      const Eigen::VectorXd re = relative_error(iter.n, next.n, cfg.guard_n);
      double max_re = 0.0;
      for (int i = 0; i < n; ++i) {
        if (re[i] > cfg.tol) last_exceed[i] = sweep;
        max_re = std::max(max_re, re[i]);
      }
      iter = std::move(next);
      rep.sweeps = sweep;
      rep.final_re = max_re;
      if (!cfg.fixed_iterations && max_re <= cfg.tol) {
        rep.converged = true;
        break;
      }
    }
    if (cfg.fixed_iterations) rep.converged = true;
    double sum_iters = 0.0;
    for (int i = 0; i < n; ++i) sum_iters += std::max(last_exceed[i], 1);
    rep.mean_cell_iters = sum_iters / n;

    state = std::move(iter);
    t = t_next;
    res.steps.push_back(rep);
    record(state, t);
    for (int i = 0; i < n; ++i) {
      res.sink_total += p.sink_rate(i, state.psi[i]) * p.grid.volume[i] * dt_m;
    }
  }
  res.final_state = state;
  return res;
}

Dataset generate_reference_solutions(const Problem& p, const LschemeConfig& head_cfg,
                                     const GrwConfig& particle_cfg, bool include_initial_level) {
  const SolveResult heads = solve_lscheme(p, head_cfg);
  const SolveResult counts = solve_grw(p, particle_cfg);
  if (heads.psi_history.size() != counts.n_history.size()) {
    throw SolverError("reference solves produced mismatched histories");
  }
  Dataset ds;
  ds.units = p.units;
  ds.particle_scale = particle_cfg.scale.per_unit_head;
  const int n = p.grid.num_cells();
  const int levels = static_cast<int>(heads.psi_history.size());
  for (int m = include_initial_level ? 0 : 1; m < levels; ++m) {
    const bool conv = m == 0 || (heads.steps[m - 1].converged && counts.steps[m - 1].converged);
    for (int i = 0; i < n; ++i) {
      ds.rows.push_back({i, m, heads.psi_history[m][i], counts.n_history[m][i], conv});
    }
  }
  return ds;
}

}  // namespace drw
