#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "drw/common.hpp"

namespace drw {

/// Fully-connected scalar-to-scalar network shape: layer_sizes runs from the
/// input width (1) through the hidden widths to the output width (1).
struct MlpSpec {
  std::vector<int> layer_sizes{1, 256, 256, 256, 1};
  double leaky_slope = 0.01;
  void validate() const;
};

/// y = scale * x + shift.
struct Affine {
  double scale = 1.0;
  double shift = 0.0;
  double apply(double x) const { return scale * x + shift; }
};

/// A trained network plus the affine input/output normalization constants it
/// was trained with. Raw particle counts (~1e12) or heads enter `eval`; the
/// normalization is part of the function and is persisted with the weights.
class Mlp {
 public:
  MlpSpec spec;
  Affine in_norm;   // raw input -> [-1, 1]
  Affine out_norm;  // network output -> raw target units
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: layer_sizes[l+1] x layer_sizes[l]
  std::vector<Eigen::VectorXd> biases;

  double particle_scale = 0.0;  // scale factor of the training data
  double input_min = 0.0;       // trained raw-input range
  double input_max = 0.0;
  std::string id;
  std::string parent_id;
  std::string train_digest;

  double eval(double x) const;
  Eigen::VectorXd eval_batch(const Eigen::VectorXd& xs) const;

  std::size_t parameter_count() const;
  std::vector<double> flatten_parameters() const;
  void set_parameters(const std::vector<double>& flat);
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double validation_fraction = 0.1;
  void validate() const;
};

struct TrainResult {
  Mlp net;
  std::vector<double> train_mse;  // per epoch, normalized units
  std::vector<double> val_mse;
  bool diverged = false;
  int epochs_run = 0;
};

/// Seeded weight initialization (uniform Glorot), no normalization set.
Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed);

/// Plain SGD on the MSE loss. Normalization constants are fitted to the
/// training data min/max; seeded runs are bit-reproducible. On divergence the
/// last finite epoch snapshot is returned with `diverged` set.
TrainResult train(const std::vector<double>& inputs, const std::vector<double>& targets,
                  const MlpSpec& spec, const TrainConfig& cfg);

/// Fine-tunes an existing checkpoint on new data, keeping its normalization;
/// records the parent id.
TrainResult retrain(const Mlp& parent, const std::vector<double>& inputs,
                    const std::vector<double>& targets, const TrainConfig& cfg);

/// MSE over the given raw samples in normalized space, with the gradient
/// w.r.t. all parameters (flattened like flatten_parameters). Used by the
/// finite-difference gradient check.
double mse_loss_and_gradient(const Mlp& net, const std::vector<double>& inputs,
                             const std::vector<double>& targets, std::vector<double>& grad);

void save_checkpoint(const Mlp& net, const std::string& path);
Mlp load_checkpoint(const std::string& path);

/// Gaussian data augmentation of (psi, n) reference pairs. Each copy pass
/// draws one Z ~ N(0, sigma^2) per row and emits (psi + Z, n + scale * Z);
/// the head-unit noise is scaled commensurately for the particle column.
/// `target_rows >= 0` appends partial passes (cycling sigmas) until the total
/// reaches the target exactly.
struct AugmentConfig {
  std::vector<double> sigmas{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<int> copies_per_sigma{1, 1, 1, 1, 1};
  std::uint64_t seed = 0;
  long target_rows = -1;
  void validate() const;
};

}  // namespace drw
