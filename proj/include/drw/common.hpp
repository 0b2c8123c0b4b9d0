#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace drw {

/// Unit system a problem is expressed in. No implicit conversion is ever
/// performed; all soil parameters, grid extents and times are stored in the
/// declared units.
enum class UnitSystem { CmSeconds, MSeconds };

std::string to_string(UnitSystem u);
UnitSystem unit_system_from_string(const std::string& s);

/// Invalid parameters, malformed configs, missing files.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside a solver (non-finite update, singular system).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Failed reads/writes of artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec3 = std::array<double, 3>;

/// Deterministic random stream. mt19937_64 has a standard-pinned algorithm;
/// the uniform/normal transforms below are hand-rolled so that streams do not
/// depend on the standard library's unspecified distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// FNV-1a over a string; used for config digests and checkpoint ids.
std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace drw
