#include "drw/grid.hpp"

#include <cmath>
#include <numeric>

namespace drw {

double Grid::total_volume() const {
  return std::accumulate(volume.begin(), volume.end(), 0.0);
}

namespace {

void check_positive_extents(const std::vector<double>& extents, const std::vector<int>& cells) {
  if (extents.empty() || extents.size() > 3 || extents.size() != cells.size()) {
    throw ConfigError("grid needs 1..3 axes with matching extents and cell counts");
  }
  for (double e : extents) {
    if (!(e > 0.0)) throw ConfigError("grid extents must be > 0");
  }
  for (int c : cells) {
    if (c < 1) throw ConfigError("grid cell counts must be >= 1");
  }
}

}  // namespace

Grid build_cartesian_grid(const std::vector<double>& extents, const std::vector<int>& cells,
                          int vertical_axis, const std::vector<bool>& periodic) {
  check_positive_extents(extents, cells);
  Grid g;
  g.coords = CoordinateSystem::Cartesian;
  g.dim = static_cast<int>(cells.size());
  if (vertical_axis == -2) vertical_axis = g.dim - 1;
  if (vertical_axis >= g.dim) throw ConfigError("vertical axis out of range");
  g.vertical_axis = vertical_axis;

  std::array<bool, 3> wrap{false, false, false};
  for (std::size_t a = 0; a < periodic.size() && a < 3; ++a) wrap[a] = periodic[a];

  for (int a = 0; a < 3; ++a) {
    g.cells_per_axis[a] = a < g.dim ? cells[a] : 1;
    g.extents[a] = a < g.dim ? extents[a] : 0.0;
    g.step[a] = a < g.dim ? extents[a] / cells[a] : 0.0;
  }

  const int n = g.cells_per_axis[0] * g.cells_per_axis[1] * g.cells_per_axis[2];
  double cell_vol = 1.0;
  for (int a = 0; a < g.dim; ++a) cell_vol *= g.step[a];

  g.volume.assign(n, cell_vol);
  g.center.resize(n);
  g.elevation.resize(n);
  g.face_offset.assign(n + 1, 0);
  g.face.reserve(static_cast<std::size_t>(n) * 2 * g.dim);

  for (int k = 0; k < g.cells_per_axis[2]; ++k)
    for (int j = 0; j < g.cells_per_axis[1]; ++j)
      for (int i = 0; i < g.cells_per_axis[0]; ++i) {
        const int c = g.cell_index(i, j, k);
        g.center[c] = {(i + 0.5) * g.step[0], (j + 0.5) * g.step[1], (k + 0.5) * g.step[2]};
        g.elevation[c] = vertical_axis >= 0 ? g.center[c][vertical_axis] : 0.0;
      }

  for (int k = 0; k < g.cells_per_axis[2]; ++k)
    for (int j = 0; j < g.cells_per_axis[1]; ++j)
      for (int i = 0; i < g.cells_per_axis[0]; ++i) {
        const int c = g.cell_index(i, j, k);
        const std::array<int, 3> idx{i, j, k};
        for (int a = 0; a < g.dim; ++a) {
          double area = 1.0;
          for (int b = 0; b < g.dim; ++b)
            if (b != a) area *= g.step[b];
          for (int side = -1; side <= 1; side += 2) {
            Face f;
            f.axis = a;
            f.sign = side;
            f.area = area;
            f.metric = 1.0;
            f.area_vec = {0, 0, 0};
            f.area_vec[a] = side * area;
            std::array<int, 3> nb = idx;
            nb[a] += side;
            const bool inside = nb[a] >= 0 && nb[a] < g.cells_per_axis[a];
            if (inside || wrap[a]) {
              if (!inside) nb[a] = (nb[a] + g.cells_per_axis[a]) % g.cells_per_axis[a];
              const int other = g.cell_index(nb[0], nb[1], nb[2]);
              f.neighbor = other;
              f.dist = g.step[a];
              // Periodic wraps continue the elevation geometrically.
              f.z_other = inside ? g.elevation[other]
                                 : g.elevation[c] + (a == vertical_axis ? side * g.step[a] : 0.0);
            } else {
              BoundarySlot slot;
              slot.cell = c;
              slot.axis = a;
              slot.sign = side;
              slot.face_center = g.center[c];
              slot.face_center[a] += side * 0.5 * g.step[a];
              slot.area = area;
              slot.z = vertical_axis >= 0 ? slot.face_center[vertical_axis] : 0.0;
              slot.face_index = static_cast<int>(g.face.size());
              f.neighbor = -1 - static_cast<int>(g.boundary.size());
              f.dist = 0.5 * g.step[a];
              f.z_other = slot.z;
              g.boundary.push_back(slot);
            }
            g.face.push_back(f);
          }
        }
        g.face_offset[c + 1] = static_cast<int>(g.face.size());
      }
  return g;
}

Grid build_cylindrical_grid(double radius, double depth, int n_r, int n_az, int n_z) {
  if (!(radius > 0.0) || !(depth > 0.0)) throw ConfigError("radius and depth must be > 0");
  if (n_r < 1 || n_az < 1 || n_z < 1) throw ConfigError("cylindrical cell counts must be >= 1");

  Grid g;
  g.coords = CoordinateSystem::Cylindrical;
  g.dim = 3;
  g.vertical_axis = 2;
  g.cells_per_axis = {n_r, n_az, n_z};
  const double two_pi = 2.0 * M_PI;
  g.extents = {radius, two_pi, depth};
  const double dr = radius / n_r;
  const double dw = two_pi / n_az;
  const double dz = depth / n_z;
  g.step = {dr, dw, dz};

  const int n = n_r * n_az * n_z;
  g.volume.resize(n);
  g.center.resize(n);
  g.elevation.resize(n);
  g.face_offset.assign(n + 1, 0);

  auto radial_area_vec = [&](double rho, double w0, double w1, int out_sign) -> Vec3 {
    // Integrated outward normal of the arc face at radius rho.
    const double sx = rho * dz * (std::sin(w1) - std::sin(w0));
    const double sy = rho * dz * (std::cos(w0) - std::cos(w1));
    return {out_sign * sx, out_sign * sy, 0.0};
  };

  for (int k = 0; k < n_z; ++k)
    for (int j = 0; j < n_az; ++j)
      for (int i = 0; i < n_r; ++i) {
        const int c = g.cell_index(i, j, k);
        const double r_in = i * dr;
        const double r_out = (i + 1) * dr;
        const double r_c = (i + 0.5) * dr;
        const double w_c = (j + 0.5) * dw;
        const double z_c = (k + 0.5) * dz;
        g.center[c] = {r_c, w_c, z_c};
        g.elevation[c] = z_c;
        g.volume[c] = 0.5 * (r_out * r_out - r_in * r_in) * dw * dz;

        // Radial faces.
        for (int side = -1; side <= 1; side += 2) {
          Face f;
          f.axis = 0;
          f.sign = side;
          const double rho = side < 0 ? r_in : r_out;
          f.area = rho * dw * dz;
          f.metric = 1.0;
          f.area_vec = radial_area_vec(rho, w_c - 0.5 * dw, w_c + 0.5 * dw, side);
          const int ni = i + side;
          if (ni >= 0 && ni < n_r) {
            f.neighbor = g.cell_index(ni, j, k);
            f.dist = dr;
            f.z_other = z_c;
          } else {
            BoundarySlot slot{c, static_cast<int>(g.face.size()), 0, side,
                              {rho, w_c, z_c}, f.area, z_c};
            f.neighbor = -1 - static_cast<int>(g.boundary.size());
            f.dist = 0.5 * dr;
            f.z_other = z_c;
            g.boundary.push_back(slot);
          }
          g.face.push_back(f);
        }

        // Azimuthal faces: always periodic, metric 1/r_j^2 with the
        // face-adjacent cell-center radius.
        for (int side = -1; side <= 1; side += 2) {
          Face f;
          f.axis = 1;
          f.sign = side;
          f.area = dr * dz;
          f.metric = 1.0 / (r_c * r_c);
          const double w_face = w_c + side * 0.5 * dw;
          f.area_vec = {side * -std::sin(w_face) * f.area, side * std::cos(w_face) * f.area, 0.0};
          const int nj = (j + side + n_az) % n_az;
          f.neighbor = g.cell_index(i, nj, k);
          f.dist = r_c * dw;  // arc-consistent center-to-center distance
          f.z_other = z_c;
          g.face.push_back(f);
        }

        // Axial faces.
        for (int side = -1; side <= 1; side += 2) {
          Face f;
          f.axis = 2;
          f.sign = side;
          f.area = 0.5 * (r_out * r_out - r_in * r_in) * dw;
          f.metric = 1.0;
          f.area_vec = {0.0, 0.0, side * f.area};
          const int nk = k + side;
          if (nk >= 0 && nk < n_z) {
            f.neighbor = g.cell_index(i, j, nk);
            f.dist = dz;
            f.z_other = g.elevation[g.cell_index(i, j, nk)];
          } else {
            const double z_face = z_c + side * 0.5 * dz;
            BoundarySlot slot{c, static_cast<int>(g.face.size()), 2, side,
                              {r_c, w_c, z_face}, f.area, z_face};
            f.neighbor = -1 - static_cast<int>(g.boundary.size());
            f.dist = 0.5 * dz;
            f.z_other = z_face;
            g.boundary.push_back(slot);
          }
          g.face.push_back(f);
        }
        g.face_offset[c + 1] = static_cast<int>(g.face.size());
      }
  return g;
}

std::vector<NeighborInfo> neighbors(const Grid& grid, int cell) {
  if (cell < 0 || cell >= grid.num_cells()) throw ConfigError("cell index out of range");
  std::vector<NeighborInfo> out;
  for (const Face& f : grid.faces(cell)) {
    out.push_back({f.is_boundary() ? -1 : f.neighbor, f});
  }
  return out;
}

}  // namespace drw
