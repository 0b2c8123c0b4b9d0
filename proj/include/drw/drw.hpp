#pragma once

#include <memory>

#include "drw/grw.hpp"
#include "drw/mlp.hpp"

namespace drw {

/// Pointwise scalar map used for the head<->count conversions inside the DRW
/// sweep. Implementations are pure and reentrant.
class ScalarMap {
 public:
  virtual ~ScalarMap() = default;
  virtual double eval(double x) const = 0;
  virtual Eigen::VectorXd eval_batch(const Eigen::VectorXd& xs) const {
    Eigen::VectorXd out(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = eval(xs[i]);
    return out;
  }
  /// Trained input range; queries outside it are extrapolations. Unbounded
  /// maps return (-inf, +inf).
  virtual std::pair<double, double> input_range() const {
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  virtual double particle_scale() const = 0;
};

/// Exact linear decode psi = -n / scale (the GRW proportionality assumption).
class LinearForwardMap final : public ScalarMap {
 public:
  explicit LinearForwardMap(ParticleScale s) : scale_(s) { s.validate(); }
  double eval(double n) const override { return -n / scale_.per_unit_head; }
  Eigen::VectorXd eval_batch(const Eigen::VectorXd& xs) const override {
    return -xs / scale_.per_unit_head;
  }
  double particle_scale() const override { return scale_.per_unit_head; }

 private:
  ParticleScale scale_;
};

/// Exact linear encode n = -scale * psi.
class LinearInverseMap final : public ScalarMap {
 public:
  explicit LinearInverseMap(ParticleScale s) : scale_(s) { s.validate(); }
  double eval(double psi) const override { return -scale_.per_unit_head * psi; }
  Eigen::VectorXd eval_batch(const Eigen::VectorXd& xs) const override {
    return -scale_.per_unit_head * xs;
  }
  double particle_scale() const override { return scale_.per_unit_head; }

 private:
  ParticleScale scale_;
};

/// A trained network as a scalar map.
class MlpScalarMap final : public ScalarMap {
 public:
  explicit MlpScalarMap(Mlp net) : net_(std::move(net)) {}
  double eval(double x) const override { return net_.eval(x); }
  Eigen::VectorXd eval_batch(const Eigen::VectorXd& xs) const override {
    return net_.eval_batch(xs);
  }
  std::pair<double, double> input_range() const override {
    return {net_.input_min, net_.input_max};
  }
  double particle_scale() const override { return net_.particle_scale; }
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
};

/// DRW = particle-count iteration with adaptive L and the learned
/// forward/inverse maps. `lscheme` supplies L0/rho/tolerance machinery and
/// the conditioning safeguard; `re_tol` is the Eq.-21 convergence tolerance
/// on the particle iterates.
struct DrwConfig {
  LschemeConfig lscheme;
  ParticleScale scale;
  double re_tol = 1e-6;
  double guard_n = 1.0;
  bool decode_per_iterate = true;  // false: freeze decoded heads per time step
  std::shared_ptr<const ScalarMap> forward;  // n -> psi
  std::shared_ptr<const ScalarMap> inverse;  // psi -> n

  void validate() const;
};

/// The head-like source J of one sweep (gravity + boundary extras + storage
/// + sink, each scaled by 1/L_i). Requires s.L selected and s.psi decoded.
Eigen::VectorXd drw_source_J(const Problem& p, const FieldState& s, const FieldState& prev,
                             double t, double dt);

/// One DRW Jacobi sweep: n' = n + pair_flux/L + f_inv(J). The state must
/// carry decoded heads, theta, and selected L.
FieldState drw_sweep(const Problem& p, const FieldState& s, const FieldState& prev, double t,
                     double dt, const DrwConfig& cfg, int* extrapolations = nullptr);

/// Particle-space residual aggregate G = pair_flux + f_inv(J*L) used to
/// select L (Eq.-10 form with g, psi replaced by their particle-space
/// counterparts), plus the decoded fields it was built from.
struct DrwAssembly {
  Eigen::VectorXd psi;      // decoded heads
  Eigen::VectorXd theta;
  Eigen::VectorXd pair;     // count-coupled flux sum
  Eigen::VectorXd J_tilde;  // L-free head-like source
  Eigen::VectorXd G;        // pair + f_inv(J_tilde)
  int extrapolations = 0;
};

DrwAssembly drw_assemble(const Problem& p, const Eigen::VectorXd& n,
                         const Eigen::VectorXd& theta_prev, double t, double dt,
                         const DrwConfig& cfg, const Eigen::VectorXd* frozen_psi = nullptr);

SolveResult solve_drw(const Problem& p, const DrwConfig& cfg, const SolveOptions& opts = {});

}  // namespace drw
