#include "drw/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace drw {

using json = nlohmann::json;

void MlpSpec::validate() const {
  if (layer_sizes.size() < 3) throw ConfigError("MLP needs at least one hidden layer");
  if (layer_sizes.front() != 1 || layer_sizes.back() != 1)
    throw ConfigError("MLP maps scalars: input and output widths must be 1");
  for (int w : layer_sizes)
    if (w < 1) throw ConfigError("MLP widths must be >= 1");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw ConfigError("leaky slope must be in (0, 1)");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw ConfigError("validation_fraction must be in [0, 1)");
}

void AugmentConfig::validate() const {
  if (sigmas.empty()) throw ConfigError("augment needs at least one sigma");
  for (double s : sigmas)
    if (!(s > 0.0)) throw ConfigError("sigmas must be > 0");
  if (copies_per_sigma.size() != sigmas.size())
    throw ConfigError("copies_per_sigma must match sigmas");
  for (int c : copies_per_sigma)
    if (c < 0) throw ConfigError("copies must be >= 0");
}

namespace {

inline double leaky(double z, double a) { return z >= 0.0 ? z : a * z; }
inline double leaky_grad(double z, double a) { return z >= 0.0 ? 1.0 : a; }

}  // namespace

double Mlp::eval(double x) const {
  Eigen::VectorXd a(1);
  a[0] = in_norm.apply(x);
  const std::size_t L = weights.size();
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::VectorXd z = weights[l] * a + biases[l];
    if (l + 1 < L) {
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = leaky(z[i], spec.leaky_slope);
    }
    a = std::move(z);
  }
  return out_norm.apply(a[0]);
}

Eigen::VectorXd Mlp::eval_batch(const Eigen::VectorXd& xs) const {
  const Eigen::Index B = xs.size();
  Eigen::MatrixXd a(1, B);
  for (Eigen::Index c = 0; c < B; ++c) a(0, c) = in_norm.apply(xs[c]);
  const std::size_t L = weights.size();
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd z = (weights[l] * a).colwise() + biases[l];
    if (l + 1 < L) {
      z = z.unaryExpr([s = spec.leaky_slope](double v) { return leaky(v, s); });
    }
    a = std::move(z);
  }
  Eigen::VectorXd out(B);
  for (Eigen::Index c = 0; c < B; ++c) out[c] = out_norm.apply(a(0, c));
  return out;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += static_cast<std::size_t>(weights[l].size()) + biases[l].size();
  }
  return n;
}

std::vector<double> Mlp::flatten_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) flat.push_back(weights[l](r, c));
    for (Eigen::Index i = 0; i < biases[l].size(); ++i) flat.push_back(biases[l][i]);
  }
  return flat;
}

void Mlp::set_parameters(const std::vector<double>& flat) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) weights[l](r, c) = flat.at(k++);
    for (Eigen::Index i = 0; i < biases[l].size(); ++i) biases[l][i] = flat.at(k++);
  }
}

Mlp init_mlp(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  Mlp net;
  net.spec = spec;
  Rng rng(seed);
  const std::size_t L = spec.layer_sizes.size() - 1;
  net.weights.resize(L);
  net.biases.resize(L);
  for (std::size_t l = 0; l < L; ++l) {
    const int fan_in = spec.layer_sizes[l];
    const int fan_out = spec.layer_sizes[l + 1];
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    net.weights[l].resize(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r)
      for (Eigen::Index c = 0; c < fan_in; ++c)
        net.weights[l](r, c) = (2.0 * rng.uniform() - 1.0) * lim;
    net.biases[l] = Eigen::VectorXd::Zero(fan_out);
  }
  return net;
}

namespace {

// Forward pass on a batch, keeping pre-activations for backprop.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> a;  // activations per layer, a[0] = normalized input
  std::vector<Eigen::MatrixXd> z;  // pre-activations
};

void forward_batch(const Mlp& net, const Eigen::MatrixXd& x_norm, ForwardCache& fc) {
  const std::size_t L = net.weights.size();
  fc.a.assign(L + 1, {});
  fc.z.assign(L, {});
  fc.a[0] = x_norm;
  for (std::size_t l = 0; l < L; ++l) {
    fc.z[l] = (net.weights[l] * fc.a[l]).colwise() + net.biases[l];
    if (l + 1 < L) {
      fc.a[l + 1] =
          fc.z[l].unaryExpr([s = net.spec.leaky_slope](double v) { return leaky(v, s); });
    } else {
      fc.a[l + 1] = fc.z[l];
    }
  }
}

// MSE loss in normalized space and parameter gradients; returns the loss.
double backward_batch(const Mlp& net, const ForwardCache& fc, const Eigen::MatrixXd& y_norm,
                      std::vector<Eigen::MatrixXd>& gW, std::vector<Eigen::VectorXd>& gb) {
  const std::size_t L = net.weights.size();
  const Eigen::Index B = y_norm.cols();
  Eigen::MatrixXd delta = fc.a[L] - y_norm;  // 1 x B
  const double loss = delta.array().square().sum() / static_cast<double>(B);
  delta *= 2.0 / static_cast<double>(B);
  for (std::size_t l = L; l-- > 0;) {
    if (l + 1 < L) {
      delta = delta.cwiseProduct(fc.z[l].unaryExpr(
          [s = net.spec.leaky_slope](double v) { return leaky_grad(v, s); }));
    }
    gW[l] = delta * fc.a[l].transpose();
    gb[l] = delta.rowwise().sum();
    if (l > 0) delta = net.weights[l].transpose() * delta;
  }
  return loss;
}

Affine fit_input_norm(const std::vector<double>& xs) {
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  const double span = *mx - *mn;
  if (span <= 0.0) return {1.0, -*mn};
  return {2.0 / span, -(*mx + *mn) / span};
}

Affine fit_output_norm(const std::vector<double>& ys) {
  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
  const double span = *mx - *mn;
  if (span <= 0.0) return {1.0, *mn};
  return {0.5 * span, 0.5 * (*mx + *mn)};  // y_raw = s * y_net + c
}

double eval_mse(const Mlp& net, const std::vector<double>& xs, const std::vector<double>& ys,
                const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  double sum = 0.0;
  const double inv_out = 1.0 / net.out_norm.scale;
  for (std::size_t i : idx) {
    const double y_net = (net.eval(xs[i]) - net.out_norm.shift) * inv_out;
    const double y_t = (ys[i] - net.out_norm.shift) * inv_out;
    const double d = y_net - y_t;
    sum += d * d;
  }
  return sum / static_cast<double>(idx.size());
}

std::string digest_config(const TrainConfig& cfg, std::size_t rows) {
  std::ostringstream os;
  os << cfg.learning_rate << '|' << cfg.epochs << '|' << cfg.batch_size << '|' << cfg.seed << '|'
     << cfg.validation_fraction << '|' << rows;
  return hex64(fnv1a(os.str()));
}

TrainResult run_sgd(Mlp net, const std::vector<double>& xs, const std::vector<double>& ys,
                    const TrainConfig& cfg) {
  const std::size_t N = xs.size();
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  const std::size_t n_val = static_cast<std::size_t>(cfg.validation_fraction * N);
  std::vector<std::size_t> val_idx(order.end() - n_val, order.end());
  std::vector<std::size_t> train_idx(order.begin(), order.end() - n_val);
  if (train_idx.empty()) throw ConfigError("no training rows left after validation split");

  TrainResult result;
  const std::size_t L = net.weights.size();
  std::vector<Eigen::MatrixXd> gW(L);
  std::vector<Eigen::VectorXd> gb(L);
  ForwardCache fc;

  Mlp snapshot = net;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(train_idx);
    double epoch_loss = 0.0;
    std::size_t batches = 0;
    bool bad = false;
    for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(train_idx.size(), start + cfg.batch_size);
      const Eigen::Index B = static_cast<Eigen::Index>(end - start);
      Eigen::MatrixXd xb(1, B), yb(1, B);
      for (Eigen::Index c = 0; c < B; ++c) {
        const std::size_t i = train_idx[start + c];
        xb(0, c) = net.in_norm.apply(xs[i]);
        yb(0, c) = (ys[i] - net.out_norm.shift) / net.out_norm.scale;
      }
      forward_batch(net, xb, fc);
      const double loss = backward_batch(net, fc, yb, gW, gb);
      if (!std::isfinite(loss)) {
        bad = true;
        break;
      }
      for (std::size_t l = 0; l < L; ++l) {
        net.weights[l] -= cfg.learning_rate * gW[l];
        net.biases[l] -= cfg.learning_rate * gb[l];
      }
      epoch_loss += loss;
      ++batches;
    }
    if (bad || !std::isfinite(epoch_loss)) {
      net = snapshot;  // last finite checkpoint
      result.diverged = true;
      break;
    }
    snapshot = net;
    result.train_mse.push_back(epoch_loss / std::max<std::size_t>(batches, 1));
    result.val_mse.push_back(eval_mse(net, xs, ys, val_idx));
    result.epochs_run = epoch + 1;
  }

  net.train_digest = digest_config(cfg, N);
  net.id = hex64(fnv1a(net.train_digest + std::to_string(net.parameter_count()) +
                       std::to_string(net.weights[0](0, 0)) +
                       std::to_string(net.weights[L - 1](0, 0)) +
                       std::to_string(result.epochs_run)));
  result.net = std::move(net);
  return result;
}

}  // namespace

TrainResult train(const std::vector<double>& inputs, const std::vector<double>& targets,
                  const MlpSpec& spec, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.empty() || inputs.size() != targets.size())
    throw ConfigError("training set must be nonempty with matching inputs/targets");
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!std::isfinite(inputs[i]) || !std::isfinite(targets[i]))
      throw ConfigError("training data must be finite");
  }
  Mlp net = init_mlp(spec, cfg.seed);
  net.in_norm = fit_input_norm(inputs);
  net.out_norm = fit_output_norm(targets);
  const auto [mn, mx] = std::minmax_element(inputs.begin(), inputs.end());
  net.input_min = *mn;
  net.input_max = *mx;
  return run_sgd(std::move(net), inputs, targets, cfg);
}

TrainResult retrain(const Mlp& parent, const std::vector<double>& inputs,
                    const std::vector<double>& targets, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.empty() || inputs.size() != targets.size())
    throw ConfigError("training set must be nonempty with matching inputs/targets");
  Mlp net = parent;
  net.parent_id = parent.id;
  net.input_min = std::min(parent.input_min, *std::min_element(inputs.begin(), inputs.end()));
  net.input_max = std::max(parent.input_max, *std::max_element(inputs.begin(), inputs.end()));
  return run_sgd(std::move(net), inputs, targets, cfg);
}

double mse_loss_and_gradient(const Mlp& net, const std::vector<double>& inputs,
                             const std::vector<double>& targets, std::vector<double>& grad) {
  const Eigen::Index B = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd xb(1, B), yb(1, B);
  for (Eigen::Index c = 0; c < B; ++c) {
    xb(0, c) = net.in_norm.apply(inputs[c]);
    yb(0, c) = (targets[c] - net.out_norm.shift) / net.out_norm.scale;
  }
  ForwardCache fc;
  forward_batch(net, xb, fc);
  const std::size_t L = net.weights.size();
  std::vector<Eigen::MatrixXd> gW(L);
  std::vector<Eigen::VectorXd> gb(L);
  const double loss = backward_batch(net, fc, yb, gW, gb);
  grad.clear();
  grad.reserve(net.parameter_count());
  for (std::size_t l = 0; l < L; ++l) {
    for (Eigen::Index r = 0; r < gW[l].rows(); ++r)
      for (Eigen::Index c = 0; c < gW[l].cols(); ++c) grad.push_back(gW[l](r, c));
    for (Eigen::Index i = 0; i < gb[l].size(); ++i) grad.push_back(gb[l][i]);
  }
  return loss;
}

void save_checkpoint(const Mlp& net, const std::string& path) {
  json j;
  j["schema"] = "drw-checkpoint-1";
  j["layer_sizes"] = net.spec.layer_sizes;
  j["leaky_slope"] = net.spec.leaky_slope;
  j["in_norm"] = {{"scale", net.in_norm.scale}, {"shift", net.in_norm.shift}};
  j["out_norm"] = {{"scale", net.out_norm.scale}, {"shift", net.out_norm.shift}};
  j["particle_scale"] = net.particle_scale;
  j["input_min"] = net.input_min;
  j["input_max"] = net.input_max;
  j["id"] = net.id;
  j["parent_id"] = net.parent_id;
  j["train_digest"] = net.train_digest;
  json ws = json::array(), bs = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    json w = json::array();
    for (Eigen::Index r = 0; r < net.weights[l].rows(); ++r)
      for (Eigen::Index c = 0; c < net.weights[l].cols(); ++c) w.push_back(net.weights[l](r, c));
    ws.push_back(std::move(w));
    json b = json::array();
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) b.push_back(net.biases[l][i]);
    bs.push_back(std::move(b));
  }
  j["weights"] = std::move(ws);
  j["biases"] = std::move(bs);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out << j.dump();
  if (!out) throw IoError("short write on checkpoint: " + path);
}

Mlp load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("corrupt checkpoint " + path + ": " + e.what());
  }
  if (!j.contains("schema") || j["schema"] != "drw-checkpoint-1")
    throw IoError("checkpoint schema mismatch in " + path);
  Mlp net;
  try {
    net.spec.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    net.spec.leaky_slope = j.at("leaky_slope").get<double>();
    net.spec.validate();
    net.in_norm = {j.at("in_norm").at("scale"), j.at("in_norm").at("shift")};
    net.out_norm = {j.at("out_norm").at("scale"), j.at("out_norm").at("shift")};
    net.particle_scale = j.at("particle_scale").get<double>();
    net.input_min = j.at("input_min").get<double>();
    net.input_max = j.at("input_max").get<double>();
    net.id = j.at("id").get<std::string>();
    net.parent_id = j.value("parent_id", "");
    net.train_digest = j.value("train_digest", "");
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    const std::size_t L = net.spec.layer_sizes.size() - 1;
    if (ws.size() != L || bs.size() != L) throw IoError("truncated checkpoint " + path);
    net.weights.resize(L);
    net.biases.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
      const int rows = net.spec.layer_sizes[l + 1];
      const int cols = net.spec.layer_sizes[l];
      const auto& w = ws[l];
      const auto& b = bs[l];
      if (static_cast<int>(w.size()) != rows * cols || static_cast<int>(b.size()) != rows)
        throw IoError("checkpoint layer " + std::to_string(l) + " has wrong shape in " + path);
      net.weights[l].resize(rows, cols);
      std::size_t k = 0;
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) net.weights[l](r, c) = w[k++].get<double>();
      net.biases[l].resize(rows);
      for (int r = 0; r < rows; ++r) net.biases[l][r] = b[r].get<double>();
    }
  } catch (const json::exception& e) {
    throw IoError("corrupt checkpoint " + path + ": " + e.what());
  }
  return net;
}

}  // namespace drw
