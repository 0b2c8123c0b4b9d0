#include <doctest.h>

#include <cmath>
#include <set>

#include "drw/grid.hpp"

using namespace drw;

TEST_CASE("1-D column: volumes, faces, boundaries") {
  const Grid g = build_cartesian_grid({40.0}, {40});
  CHECK(g.num_cells() == 40);
  for (double v : g.volume) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  int interior_faces = 0;
  for (const Face& f : g.face)
    if (!f.is_boundary()) ++interior_faces;
  CHECK(interior_faces / 2 == 39);  // each interior face is seen from both cells
  CHECK(g.boundary.size() == 2);
  CHECK(g.vertical_axis == 0);

  const auto nb_first = neighbors(g, 0);
  CHECK(nb_first.size() == 2);
  int boundary_count = 0, interior_count = 0;
  for (const auto& n : nb_first) (n.neighbor < 0 ? boundary_count : interior_count)++;
  CHECK(boundary_count == 1);
  CHECK(interior_count == 1);

  const auto nb_mid = neighbors(g, 20);
  CHECK(nb_mid.size() == 2);
  CHECK(nb_mid[0].neighbor == 19);
  CHECK(nb_mid[1].neighbor == 21);

  CHECK_THROWS_AS(neighbors(g, 40), ConfigError);
}

TEST_CASE("2-D grid spacing") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {50, 50});
  CHECK(g.step[0] == doctest::Approx(0.02));
  CHECK(g.step[1] == doctest::Approx(0.02));
  CHECK(g.num_cells() == 2500);
  CHECK(g.vertical_axis == 1);
  CHECK(g.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate single-cell 3-D grid") {
  const Grid g = build_cartesian_grid({2.0, 2.0, 2.0}, {1, 1, 1});
  CHECK(g.num_cells() == 1);
  CHECK(g.volume[0] == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(g.boundary.size() == 6);
  const auto nb = neighbors(g, 0);
  CHECK(nb.size() == 6);
  for (const auto& n : nb) CHECK(n.neighbor == -1);
}

TEST_CASE("3-D interior cell has six neighbors with cancelling normals") {
  const Grid g = build_cartesian_grid({1.0, 1.0, 1.0}, {3, 3, 3});
  const int c = g.cell_index(1, 1, 1);
  const auto nb = neighbors(g, c);
  CHECK(nb.size() == 6);
  Vec3 sum{0, 0, 0};
  for (const auto& n : nb) {
    CHECK(n.neighbor >= 0);
    for (int a = 0; a < 3; ++a) sum[a] += n.geom.area_vec[a];
  }
  for (int a = 0; a < 3; ++a) CHECK(std::abs(sum[a]) < 1e-14);
}

TEST_CASE("cylindrical grid: counts, volume partition, periodicity") {
  const Grid g = build_cylindrical_grid(0.1, 0.25, 6, 40, 22);
  CHECK(g.num_cells() == 5280);
  CHECK(g.total_volume() ==
        doctest::Approx(M_PI * 0.1 * 0.1 * 0.25).epsilon(1e-10));

  // Azimuthal neighbor of the last azimuthal cell wraps to the first.
  const int last = g.cell_index(2, 39, 5);
  const int first = g.cell_index(2, 0, 5);
  bool wraps = false;
  for (const Face& f : g.faces(last)) {
    if (f.axis == 1 && f.sign > 0) wraps = f.neighbor == first;
  }
  CHECK(wraps);

  // The innermost radial face sits on the axis and has zero area.
  for (const Face& f : g.faces(g.cell_index(0, 0, 0))) {
    if (f.axis == 0 && f.sign < 0) {
      CHECK(f.is_boundary());
      CHECK(f.area == 0.0);
    }
  }
}

TEST_CASE("single annular cell") {
  const Grid g = build_cylindrical_grid(0.5, 2.0, 1, 1, 1);
  CHECK(g.num_cells() == 1);
  CHECK(g.volume[0] == doctest::Approx(M_PI * 0.25 * 2.0).epsilon(1e-12));
  // Azimuthal faces pair the cell with itself.
  for (const Face& f : g.faces(0)) {
    if (f.axis == 1) CHECK(f.neighbor == 0);
  }
}

TEST_CASE("Gauss consistency: closed surfaces against random constant fields") {
  Rng rng(42);
  const Grid cart = build_cartesian_grid({3.0, 2.0, 1.0}, {4, 3, 5});
  const Grid cyl = build_cylindrical_grid(0.3, 0.8, 4, 7, 3);
  for (const Grid* g : {&cart, &cyl}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
      for (int c = 0; c < g->num_cells(); c += 7) {
        double flux = 0.0, scale = 0.0;
        for (const Face& f : g->faces(c)) {
          flux += v[0] * f.area_vec[0] + v[1] * f.area_vec[1] + v[2] * f.area_vec[2];
          scale += f.area;
        }
        CHECK(std::abs(flux) <= 1e-12 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("interior face reciprocity") {
  const Grid g = build_cylindrical_grid(0.3, 0.8, 4, 7, 3);
  for (int c = 0; c < g.num_cells(); ++c) {
    for (const Face& f : g.faces(c)) {
      if (f.is_boundary()) continue;
      // Locate the twin face seen from the neighbor.
      bool found = false;
      for (const Face& t : g.faces(f.neighbor)) {
        if (t.neighbor == c && t.axis == f.axis && t.sign == -f.sign) {
          found = true;
          CHECK(t.area == doctest::Approx(f.area).epsilon(1e-14));
          CHECK(t.dist == doctest::Approx(f.dist).epsilon(1e-14));
          CHECK(t.metric == doctest::Approx(f.metric).epsilon(1e-14));
          for (int a = 0; a < 3; ++a)
            CHECK(t.area_vec[a] == doctest::Approx(-f.area_vec[a]).epsilon(1e-12));
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(build_cartesian_grid({0.0}, {10}), ConfigError);
  CHECK_THROWS_AS(build_cartesian_grid({1.0}, {0}), ConfigError);
  CHECK_THROWS_AS(build_cartesian_grid({1.0, 1.0}, {10}), ConfigError);
  CHECK_THROWS_AS(build_cylindrical_grid(-1.0, 1.0, 1, 1, 1), ConfigError);
  CHECK_THROWS_AS(build_cylindrical_grid(1.0, 1.0, 0, 1, 1), ConfigError);
}

TEST_CASE("periodic cartesian axis wraps bijectively") {
  const Grid g = build_cartesian_grid({1.0}, {5}, -1, {true});
  CHECK(g.boundary.empty());
  std::set<std::pair<int, int>> pairs;
  for (int c = 0; c < g.num_cells(); ++c) {
    for (const Face& f : g.faces(c)) {
      CHECK_FALSE(f.is_boundary());
      pairs.insert({std::min(c, f.neighbor), std::max(c, f.neighbor)});
    }
  }
  CHECK(pairs.size() == 5);  // ring of 5 cells
}
