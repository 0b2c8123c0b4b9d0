#pragma once

#include <functional>
#include <optional>
#include <variant>

#include <Eigen/Dense>

#include "drw/grid.hpp"
#include "drw/soil.hpp"

namespace drw {

/// Prescribed head at a boundary face (ghost value at the face center).
struct DirichletBC {
  std::function<double(double t, const Vec3& face_center)> psi;
};

/// Prescribed head gradient dpsi/dn along the outward normal. Gravity still
/// acts through the face, so dpsi_dn = 0 on a vertical boundary is free
/// drainage at the bottom and zero flux on the sides.
struct HeadGradientBC {
  double dpsi_dn = 0.0;
};

/// Prescribed total volumetric influx per unit face area (positive into the
/// domain); replaces the whole K grad(psi+z).n term. influx = 0 is a sealed
/// boundary.
struct FluxBC {
  std::function<double(double t)> influx;
};

using BoundaryCondition = std::variant<DirichletBC, HeadGradientBC, FluxBC>;

/// How the face conductivity is formed from the two adjacent cell values.
enum class FaceKMode { Arithmetic, Geometric, Upwind, Harmonic };

/// A fully specified solvable problem: geometry, constitutive models per
/// region, initial/boundary data, sink, and the time axis.
struct Problem {
  std::string name;
  UnitSystem units = UnitSystem::CmSeconds;
  Grid grid;
  std::vector<SoilModel> soils;
  std::vector<int> soil_of_cell;  // region index per cell
  std::function<double(const Vec3& center)> initial_psi;
  std::vector<BoundaryCondition> bc;  // one per grid.boundary slot
  std::optional<FeddesParams> sink;
  double dt = 1.0;
  double total_time = 1.0;
  FaceKMode k_mode = FaceKMode::Arithmetic;
  bool harmonic_at_material_interfaces = true;

  int num_steps() const { return static_cast<int>(std::ceil(total_time / dt - 1e-12)); }
  const SoilModel& soil(int cell) const { return soils[soil_of_cell[cell]]; }
  void validate() const;

  double theta(int cell, double psi) const { return water_content(soil(cell), psi); }
  double conductivity(int cell, double psi) const {
    return hydraulic_conductivity(soil(cell), psi);
  }
  double sink_rate(int cell, double psi) const {
    return sink ? feddes_sink(*sink, psi) : 0.0;
  }

  /// Conductivity on the face between cells i and j given cell values K_i,
  /// K_j; switches to the harmonic mean across material interfaces.
  double face_K(int i, int j, double K_i, double K_j, double h_i, double h_j) const;
};

/// Per-cell unknowns at one (time step, iterate).
struct FieldState {
  Eigen::VectorXd psi;
  Eigen::VectorXd theta;
  Eigen::VectorXd n;  // particle counts; empty for head-space solves
  Eigen::VectorXd L;  // linearization parameter per cell
  int time_index = 0;
  int iterate = 0;
};

/// Initial state from the problem's IC, with theta filled in.
FieldState make_initial_state(const Problem& p);

}  // namespace drw
