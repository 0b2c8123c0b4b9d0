#pragma once

#include <span>
#include <vector>

#include "drw/common.hpp"

namespace drw {

enum class CoordinateSystem { Cartesian, Cylindrical };

/// One face of a cell, seen from that cell. Interior and periodic faces carry
/// the neighbor cell index; boundary faces carry the index of a boundary slot
/// (neighbor = -1 - slot). `metric` is the e.n factor of the flux sum:
/// 1 on Cartesian grids, (1, 1/r_j^2, 1) picked per direction on cylindrical
/// grids with r_j the face-adjacent cell-center radius.
struct Face {
  int neighbor;     // >= 0: cell index; < 0: boundary slot -1 - neighbor
  double area;      // 1 in 1-D, lengths in 2-D, areas in 3-D
  double dist;      // center-to-center (interior) or center-to-face-center (boundary)
  double metric;    // e.n factor, always positive
  double z_other;   // elevation of the neighbor center / boundary face center
  Vec3 area_vec;    // integrated outward normal (exact for cylindrical arcs)
  int axis;         // 0, 1, 2
  int sign;         // +1 high side, -1 low side

  bool is_boundary() const { return neighbor < 0; }
  int boundary_slot() const { return -1 - neighbor; }
};

/// A boundary face, addressable independently of its owner cell so boundary
/// conditions can be attached per slot.
struct BoundarySlot {
  int cell;
  int face_index;   // global index into Grid::face
  int axis;
  int sign;
  Vec3 face_center; // native coordinates (x,y,z) or (r,omega,z)
  double area;
  double z;         // elevation of the face center
};

/// Uniform structured finite-volume grid, cell-centered. Immutable after
/// construction.
class Grid {
 public:
  CoordinateSystem coords = CoordinateSystem::Cartesian;
  int dim = 1;
  int vertical_axis = -1;  // axis carrying gravity; -1 for horizontal grids
  std::array<int, 3> cells_per_axis{1, 1, 1};
  std::array<double, 3> extents{0, 0, 0};  // cylindrical: radius, 2*pi, depth
  std::array<double, 3> step{0, 0, 0};

  std::vector<double> volume;
  std::vector<Vec3> center;       // native coordinates
  std::vector<double> elevation;  // gravity coordinate z per cell

  std::vector<int> face_offset;   // CSR over cells, size N+1
  std::vector<Face> face;
  std::vector<BoundarySlot> boundary;

  int num_cells() const { return static_cast<int>(volume.size()); }
  std::span<const Face> faces(int cell) const {
    return {face.data() + face_offset[cell],
            static_cast<std::size_t>(face_offset[cell + 1] - face_offset[cell])};
  }
  int cell_index(int i, int j, int k) const {
    return (k * cells_per_axis[1] + j) * cells_per_axis[0] + i;
  }
  double total_volume() const;
};

/// Axes that carry gravity: by convention the last active axis of a 1-D/2-D/3-D
/// Cartesian grid is vertical (elevation), unless `vertical_axis` overrides it.
/// Pass vertical_axis = -1 for a horizontal grid (no gravity variation).
Grid build_cartesian_grid(const std::vector<double>& extents,
                          const std::vector<int>& cells,
                          int vertical_axis = -2,  // -2: default (last axis)
                          const std::vector<bool>& periodic = {});

/// Cylindrical grid (r, omega, z); omega is periodic, the z axis carries
/// gravity, and the face at r = 0 has zero area (the axis condition).
Grid build_cylindrical_grid(double radius, double depth, int n_r, int n_az, int n_z);

struct NeighborInfo {
  int neighbor;  // -1 when boundary
  Face geom;
};

/// Neighbor list of one cell; boundary faces appear with neighbor = -1.
std::vector<NeighborInfo> neighbors(const Grid& grid, int cell);

}  // namespace drw
