#pragma once

#include "drw/dataset.hpp"
#include "drw/lscheme.hpp"

namespace drw {

/// Particles per unit of pressure head (default 1e10 per native head unit).
struct ParticleScale {
  double per_unit_head = 1e10;
  void validate() const {
    if (!(per_unit_head > 0.0)) throw ConfigError("particle scale must be > 0");
  }
};

/// n = round(scale |psi|); psi <= 0 maps to nonnegative counts. A positive
/// head is mapped through |psi| and flagged (outside the calibrated regime).
double head_to_particles(double psi, const ParticleScale& scale, bool* flagged = nullptr);

/// psi = -n / scale (exact inverse of the unrounded linear map).
double particles_to_head(double n, const ParticleScale& scale);

/// Eq.-21-style per-cell relative error |(n1 - n0)/n1|, with a one-particle
/// guard when n1 is zero.
Eigen::VectorXd relative_error(const Eigen::VectorXd& n_prev_iter,
                               const Eigen::VectorXd& n_next_iter, double guard = 1.0);

/// Deterministic global-random-walk baseline: particle sweeps with a static
/// linearization parameter and the linear head<->count proportionality.
struct GrwConfig {
  double static_L = 3.5;
  ParticleScale scale;
  double tol = 1e-6;
  int max_iters = 500;
  bool fixed_iterations = false;
  double dt = 0.0;  // 0: use Problem::dt
  double guard_n = 1.0;
  int cond_check_every = 0;  // record kappa every k steps; 0 disables

  void validate() const;
};

/// One Jacobi particle sweep (Eq.-20 form with the linear map in place of the
/// learned inverse). Negative counts are clamped to zero; `clamped`, when
/// given, receives the number of clamps.
FieldState grw_sweep(const Problem& p, const FieldState& s, const FieldState& prev, double t,
                     double dt, const GrwConfig& cfg, int* clamped = nullptr);

SolveResult solve_grw(const Problem& p, const GrwConfig& cfg, const SolveOptions& opts = {});

/// Runs the adaptive head-space solve and the GRW particle solve on the same
/// (coarse) problem and aligns them into (psi, n) reference pairs, one row
/// per cell and time level. `include_initial_level` also emits the t=0
/// fields. Rows from non-converged steps are flagged.
Dataset generate_reference_solutions(const Problem& p, const LschemeConfig& head_cfg,
                                     const GrwConfig& particle_cfg,
                                     bool include_initial_level = true);

}  // namespace drw
