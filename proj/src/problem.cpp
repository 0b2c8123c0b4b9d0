#include "drw/problem.hpp"

#include <cmath>

namespace drw {

void Problem::validate() const {
  if (soils.empty()) throw ConfigError(name + ": no soil models");
  for (const auto& s : soils) drw::validate(s);
  if (sink) drw::validate(*sink);
  if (static_cast<int>(soil_of_cell.size()) != grid.num_cells())
    throw ConfigError(name + ": soil region map does not cover the grid");
  for (int r : soil_of_cell)
    if (r < 0 || r >= static_cast<int>(soils.size()))
      throw ConfigError(name + ": soil region index out of range");
  if (bc.size() != grid.boundary.size())
    throw ConfigError(name + ": boundary conditions must cover every boundary face exactly once");
  if (!(dt > 0.0) || !(total_time >= dt))
    throw ConfigError(name + ": need total_time >= dt > 0");
  if (!initial_psi) throw ConfigError(name + ": missing initial condition");
}

double Problem::face_K(int i, int j, double K_i, double K_j, double h_i, double h_j) const {
  FaceKMode mode = k_mode;
  if (harmonic_at_material_interfaces && j >= 0 && soil_of_cell[i] != soil_of_cell[j]) {
    mode = FaceKMode::Harmonic;
  }
  switch (mode) {
    case FaceKMode::Arithmetic:
      return 0.5 * (K_i + K_j);
    case FaceKMode::Geometric:
      return std::sqrt(K_i * K_j);
    case FaceKMode::Upwind:
      return h_i >= h_j ? K_i : K_j;
    case FaceKMode::Harmonic:
      return 2.0 * K_i * K_j / (K_i + K_j + 1e-300);
  }
  return 0.5 * (K_i + K_j);
}

FieldState make_initial_state(const Problem& p) {
  const int n = p.grid.num_cells();
  FieldState s;
  s.psi.resize(n);
  s.theta.resize(n);
  s.L = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    s.psi[i] = p.initial_psi(p.grid.center[i]);
    s.theta[i] = p.theta(i, s.psi[i]);
  }
  s.time_index = 0;
  s.iterate = 0;
  return s;
}

}  // namespace drw
