#include "drw/drw.hpp"

#include <cmath>

namespace drw {

void DrwConfig::validate() const {
  scale.validate();
  if (!forward || !inverse) {
    throw ConfigError("DRW needs forward (n->psi) and inverse (psi->n) checkpoints");
  }
  for (const ScalarMap* m : {forward.get(), inverse.get()}) {
    const double s = m->particle_scale();
    if (s > 0.0 && std::abs(s - scale.per_unit_head) > 1e-9 * scale.per_unit_head) {
      throw ConfigError("checkpoint particle scale disagrees with the run configuration");
    }
  }
  if (!(re_tol > 0.0)) throw ConfigError("re_tol must be > 0");
  lscheme.validate();
}

namespace {

int count_outside(const Eigen::VectorXd& xs, const std::pair<double, double>& range) {
  int c = 0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (xs[i] < range.first || xs[i] > range.second) ++c;
  }
  return c;
}

BoundaryValues drw_boundary_values(const Problem& p, double t, const DrwConfig& cfg,
                                   int* extrapolations) {
  BoundaryValues bv = boundary_values(p, t);
  const auto range = cfg.inverse->input_range();
  for (std::size_t s = 0; s < bv.psi.size(); ++s) {
    if (std::isfinite(bv.psi[s])) {
      // Boundary heads enter particle space only through the learned map.
      bv.value[s] = cfg.inverse->eval(bv.psi[s]);
      if (extrapolations && (bv.psi[s] < range.first || bv.psi[s] > range.second))
        ++(*extrapolations);
    }
  }
  return bv;
}

}  // namespace

DrwAssembly drw_assemble(const Problem& p, const Eigen::VectorXd& n,
                         const Eigen::VectorXd& theta_prev, double t, double dt,
                         const DrwConfig& cfg, const Eigen::VectorXd* frozen_psi) {
  DrwAssembly out;
  if (frozen_psi) {
    out.psi = *frozen_psi;
  } else {
    out.psi = cfg.forward->eval_batch(n);
    out.extrapolations += count_outside(n, cfg.forward->input_range());
  }
  const int nc = p.grid.num_cells();
  out.theta.resize(nc);
  for (int i = 0; i < nc; ++i) out.theta[i] = p.theta(i, out.psi[i]);

  const BoundaryValues bv = drw_boundary_values(p, t, cfg, &out.extrapolations);
  const FluxAssembly fa = assemble_fluxes(p, out.psi, n, bv);
  out.pair = fa.pair;
  out.J_tilde.resize(nc);
  for (int i = 0; i < nc; ++i) {
    const double storage = (out.theta[i] - theta_prev[i]) / dt + p.sink_rate(i, out.psi[i]);
    out.J_tilde[i] = fa.rest[i] - storage * p.grid.volume[i];
  }
  out.extrapolations += count_outside(out.J_tilde, cfg.inverse->input_range());
  out.G = out.pair + cfg.inverse->eval_batch(out.J_tilde);
  return out;
}

Eigen::VectorXd drw_source_J(const Problem& p, const FieldState& s, const FieldState& prev,
                             double t, double dt) {
  const BoundaryValues bv = boundary_values(p, t);
  const FluxAssembly fa = assemble_fluxes(p, s.psi, s.psi, bv);
  const int nc = p.grid.num_cells();
  Eigen::VectorXd J(nc);
  for (int i = 0; i < nc; ++i) {
    const double storage = (s.theta[i] - prev.theta[i]) / dt + p.sink_rate(i, s.psi[i]);
    J[i] = (fa.rest[i] - storage * p.grid.volume[i]) / s.L[i];
  }
  return J;
}

FieldState drw_sweep(const Problem& p, const FieldState& s, const FieldState& prev, double t,
                     double dt, const DrwConfig& cfg, int* extrapolations) {
  DrwAssembly a = drw_assemble(p, s.n, prev.theta, t, dt, cfg);
  const int nc = p.grid.num_cells();
  Eigen::VectorXd J = a.J_tilde.cwiseQuotient(s.L);
  a.extrapolations += count_outside(J, cfg.inverse->input_range());
  const Eigen::VectorXd finv_J = cfg.inverse->eval_batch(J);

  FieldState next = s;
  next.iterate = s.iterate + 1;
  for (int i = 0; i < nc; ++i) {
    next.n[i] = s.n[i] + a.pair[i] / s.L[i] + finv_J[i];
    if (!std::isfinite(next.n[i])) {
      throw SolverError("non-finite DRW update in cell " + std::to_string(i) + " at iterate " +
                        std::to_string(next.iterate));
    }
  }
  next.psi = cfg.forward->eval_batch(next.n);
  for (int i = 0; i < nc; ++i) next.theta[i] = p.theta(i, next.psi[i]);
  if (extrapolations) *extrapolations = a.extrapolations;
  return next;
}

SolveResult solve_drw(const Problem& p, const DrwConfig& cfg, const SolveOptions& opts) {
  p.validate();
  cfg.validate();
  const double dt = cfg.lscheme.dt > 0.0 ? cfg.lscheme.dt : p.dt;
  const int steps = static_cast<int>(std::ceil(p.total_time / dt - 1e-12));
  const int nc = p.grid.num_cells();
  const double eps_n = cfg.scale.per_unit_head * cfg.lscheme.eps_psi;

  SolveResult res;
  FieldState state = make_initial_state(p);
  state.n.resize(nc);
  {
    // IC passes through the learned inverse map.
    int extra = 0;
    const auto range = cfg.inverse->input_range();
    extra += count_outside(state.psi, range);
    state.n = cfg.inverse->eval_batch(state.psi);
    state.psi = cfg.forward->eval_batch(state.n);
    for (int i = 0; i < nc; ++i) state.theta[i] = p.theta(i, state.psi[i]);
    (void)extra;
  }
  state.L = Eigen::VectorXd::Constant(nc, cfg.lscheme.L0);

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

  double L0_eff = cfg.lscheme.L0;
  double t = 0.0;
  for (int m = 1; m <= steps; ++m) {
    const double dt_m = std::min(dt, p.total_time - t);
    const double t_next = t + dt_m;
    StepReport rep;
    rep.time_index = m;
    rep.time = t_next;

    const FieldState prev = state;
    Eigen::VectorXd n_iter = prev.n;
    Eigen::VectorXd frozen_psi;
    if (!cfg.decode_per_iterate) {
      frozen_psi = cfg.forward->eval_batch(n_iter);
    }
    std::vector<int> last_exceed(nc, 0);
    const bool check_cond = cfg.lscheme.cond_check_every > 0 &&
                            (m - 1) % cfg.lscheme.cond_check_every == 0;

    for (int sweep = 1; sweep <= cfg.lscheme.max_iters; ++sweep) {
      DrwAssembly a = drw_assemble(p, n_iter, prev.theta, t_next, dt_m, cfg,
                                   cfg.decode_per_iterate ? nullptr : &frozen_psi);
      rep.extrapolations += a.extrapolations;

      Eigen::VectorXd L(nc);
      if (cfg.lscheme.adaptive) {
        const double factor = (1.0 + cfg.lscheme.rho) / cfg.lscheme.rho;
        for (int i = 0; i < nc; ++i) {
          const double denom = std::max(std::abs(n_iter[i]), eps_n);
          L[i] = std::max(L0_eff, factor * std::abs(a.G[i]) / denom);
        }
        if (check_cond && sweep == 1) {
          FieldState probe;
          probe.psi = a.psi;
          probe.theta = a.theta;
          probe.L = L;
          const BoundaryValues bv = boundary_values(p, t_next);
          double kappa = condition_number(assemble_system_matrix(p, probe, bv, dt_m));
          int doublings = 0;
          while (kappa > cfg.lscheme.cond_threshold &&
                 doublings < cfg.lscheme.cond_max_doublings) {
            L0_eff *= cfg.lscheme.cond_growth;
            ++doublings;
            for (int i = 0; i < nc; ++i) L[i] = std::max(L[i], L0_eff);
            probe.L = L;
            kappa = condition_number(assemble_system_matrix(p, probe, bv, dt_m));
          }
          rep.kappa = kappa;
        }
      } else {
        L.setConstant(cfg.lscheme.static_L);
        if (check_cond && sweep == 1) {
          FieldState probe;
          probe.psi = a.psi;
          probe.theta = a.theta;
          probe.L = L;
          const BoundaryValues bv = boundary_values(p, t_next);
          rep.kappa = condition_number(assemble_system_matrix(p, probe, bv, dt_m));
        }
      }

      Eigen::VectorXd J = a.J_tilde.cwiseQuotient(L);
      rep.extrapolations += count_outside(J, cfg.inverse->input_range());
      const Eigen::VectorXd finv_J = cfg.inverse->eval_batch(J);
      Eigen::VectorXd n_next(nc);
      double max_re = 0.0;
      for (int i = 0; i < nc; ++i) {
        n_next[i] = n_iter[i] + a.pair[i] / L[i] + finv_J[i];
        if (!std::isfinite(n_next[i])) {
          throw SolverError("non-finite DRW update in cell " + std::to_string(i) +
                            " at iterate " + std::to_string(sweep) + " of step " +
                            std::to_string(m));
        }
        const double denom = n_next[i] != 0.0 ? std::abs(n_next[i]) : cfg.guard_n;
        const double re = std::abs((n_next[i] - n_iter[i]) / denom);
        if (re > cfg.re_tol) last_exceed[i] = sweep;
        max_re = std::max(max_re, re);
      }
      n_iter = std::move(n_next);
      rep.sweeps = sweep;
      rep.final_re = max_re;
      if (!cfg.lscheme.fixed_iterations && max_re <= cfg.re_tol) {
        rep.converged = true;
        break;
      }
    }
    if (cfg.lscheme.fixed_iterations) rep.converged = true;
    double sum_iters = 0.0;
    for (int i = 0; i < nc; ++i) sum_iters += std::max(last_exceed[i], 1);
    rep.mean_cell_iters = sum_iters / nc;
    rep.L0_effective = L0_eff;

    // Converged counts decode back to heads through the forward net.
    state.n = n_iter;
    state.psi = cfg.forward->eval_batch(n_iter);
    for (int i = 0; i < nc; ++i) state.theta[i] = p.theta(i, state.psi[i]);
    state.time_index = m;
    t = t_next;
    res.steps.push_back(rep);
    record(state, t);
    for (int i = 0; i < nc; ++i) {
      res.sink_total += p.sink_rate(i, state.psi[i]) * p.grid.volume[i] * dt_m;
    }
  }
  res.final_state = state;
  res.L0_final = L0_eff;
  return res;
}

}  // namespace drw
