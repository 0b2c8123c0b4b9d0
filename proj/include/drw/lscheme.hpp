#pragma once

#include <map>
#include <string>

#include "drw/problem.hpp"

namespace drw {

/// Controls for the adaptive linearization iteration (Jacobi sweeps in head
/// space). `tol` is the per-cell relative iterate-change tolerance; `rho`
/// bounds the relative update produced by one sweep.
struct LschemeConfig {
  double L0 = 1e-3;
  double rho = 0.1;
  double tol = 1e-6;
  int max_iters = 500;
  double dt = 0.0;  // 0: use Problem::dt
  double cond_threshold = 10.0;
  double cond_growth = 2.0;
  int cond_max_doublings = 10;  // per time step
  int cond_check_every = 1;     // in time steps; 0 disables the safeguard
  bool adaptive = true;
  double static_L = 3.5;        // used when adaptive = false
  double eps_psi = 1e-12;       // division guard for Eq.-10-style bounds
  bool fixed_iterations = false;  // run exactly max_iters sweeps per step

  void validate() const;
};

/// Ghost/boundary data at one time instant: heads at Dirichlet slots, the
/// solve-variable value at those slots, and prescribed influxes.
struct BoundaryValues {
  std::vector<double> psi;     // Dirichlet ghost heads (NaN elsewhere)
  std::vector<double> value;   // ghost value in the iterated variable
  std::vector<double> influx;  // prescribed influx per area (Flux slots)
};

BoundaryValues boundary_values(const Problem& p, double t);

/// Face-flux assembly split into the part that couples cell values pairwise
/// and the rest (gravity, non-Dirichlet boundary terms). `psi_cells` feeds
/// the conductivities; `val_cells` is the iterated variable (heads or
/// particle counts).
struct FluxAssembly {
  Eigen::VectorXd pair;  // sum_f K_f (val_j - val_i)/dist * metric * area
  Eigen::VectorXd rest;  // sum_f K_f (z_j - z_i)/dist * metric * area + BC extras
};

FluxAssembly assemble_fluxes(const Problem& p, const Eigen::VectorXd& psi_cells,
                             const Eigen::VectorXd& val_cells, const BoundaryValues& bv);

/// Flux-balance residual g of the current iterate against the previous
/// time-step state:
///   g_i = sum_j K_f [(psi+z)_j - (psi+z)_i]/dist (e.n) A
///         - [(theta(psi_i^s) - theta_i^m)/dt + S(psi_i^s)] vol_i.
Eigen::VectorXd residual_g(const Problem& p, const FieldState& s, const FieldState& prev,
                           double t, double dt);

/// Adaptive linearization parameter, elementwise
///   L_i = max(L0, (1+rho) |g_i| / (rho max(|psi_i|, eps_psi))).
Eigen::VectorXd choose_linearization(const Eigen::VectorXd& g, const Eigen::VectorXd& psi,
                                     const LschemeConfig& cfg, double L0_effective);

/// One Jacobi sweep psi^{s+1} = psi^s + g/L. Throws SolverError on a
/// non-finite update, naming the cell and iterate.
FieldState lscheme_sweep(const Problem& p, const FieldState& s, const FieldState& prev,
                         double t, double dt);

/// Linearized implicit operator on increments x_i = psi_i^{s+1} - psi_i^s:
/// diag L_i + (dt/vol_i) sum_f K_f (e.n) A/dist, off-diagonal
/// -(dt/vol_i) K_f (e.n) A/dist per interior face.
Eigen::MatrixXd assemble_system_matrix(const Problem& p, const FieldState& s,
                                       const BoundaryValues& bv, double dt);

/// sigma_max / sigma_min via SVD; +inf when singular.
double condition_number(const Eigen::MatrixXd& A);

struct StepReport {
  int time_index = 0;
  double time = 0.0;
  int sweeps = 0;
  double final_re = 0.0;  // max-cell relative iterate change at exit
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double L0_effective = 0.0;
  bool converged = false;
  double mean_cell_iters = 0.0;  // per-cell first-stay-converged sweep, averaged
  bool update_bound_violated = false;   // |dpsi| <= rho|psi| + (1+rho) eps
  bool contraction_violated = false;    // non-increasing max-RE over final 90%
  int clamped_cells = 0;                // particle solves: negative counts clamped
  int extrapolations = 0;               // DRW: net queries outside trained range
};

/// Iterates one implicit-Euler step ending at t_next to tolerance (or a fixed
/// sweep budget). `L0_effective` is the running lower bound; the conditioning
/// safeguard may raise it, and the raise persists across steps.
FieldState solve_timestep(const Problem& p, const FieldState& prev, const LschemeConfig& cfg,
                          double dt, double t_next, double& L0_effective, StepReport& report);

struct SolveOptions {
  bool record_history = true;
};

/// Full time-stepping result; histories are indexed by time level (0 = IC).
struct SolveResult {
  std::vector<StepReport> steps;
  FieldState final_state;
  std::vector<Eigen::VectorXd> psi_history;
  std::vector<Eigen::VectorXd> theta_history;
  std::vector<Eigen::VectorXd> n_history;  // particle solves only
  std::vector<double> times;               // time levels, size steps+1
  std::vector<double> influx;              // net boundary influx at each level
  std::vector<std::map<std::string, double>> influx_by_group;
  double sink_total = 0.0;  // sum_steps sum_i S_i vol_i dt
  double L0_final = 0.0;

  double average_kappa() const;
  double average_cell_iterations() const;
  bool all_converged() const;
};

SolveResult solve_lscheme(const Problem& p, const LschemeConfig& cfg,
                          const SolveOptions& opts = {});

/// Instantaneous net boundary influx (and per-boundary-group breakdown) of a
/// head field at time t. Group keys look like "axis0-", "axis2+".
double boundary_influx(const Problem& p, const Eigen::VectorXd& psi, double t,
                       std::map<std::string, double>* by_group = nullptr);

/// Signed normal Darcy flux q.n per face of one cell (outward positive),
/// q = -K grad(psi + z).
std::vector<double> face_fluxes(const Problem& p, const Eigen::VectorXd& psi, int cell, double t);

}  // namespace drw
