/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "patchdd/error.hpp"
#include "patchdd/mesh.hpp"

using namespace patchdd;

namespace {

struct Bench {
  StructuredTriMesh global;
  PatchLayout layout;
  std::vector<StructuredTriMesh> patches;
  InterfaceMap map;
};

Bench make_bench(double h = 0.05) {
  Bench b;
  b.global = build_rect_mesh({0, 2, 0, 16}, 0.1, BoundaryKind::dirichlet, "global");
  b.layout = benchmark_layout(isotropic_weights(8));
  for (const Box& p : b.layout.patch_boxes) b.patches.push_back(build_rect_mesh(p, h, BoundaryKind::interface));
  b.map = build_interface_map(b.global, b.patches, b.layout);
  return b;
}

} // namespace

TEST_SUITE("mesh") {
  TEST_CASE("benchmark mesh sizes") {
    const Bench b = make_bench();
    CHECK(b.global.num_nodes() == 3381);
    CHECK(b.global.num_triangles() == 6400);
    for (const auto& p : b.patches) {
      CHECK(p.num_nodes() == 441);
      CHECK(p.num_triangles() == 800);
    }
    for (const auto& iface : b.map.patches) {
      CHECK(iface.fine_nodes.size() == 80);
      CHECK(iface.coarse_nodes.size() == 40);
      CHECK(iface.interior_coarse_nodes.size() == 81);
      CHECK(iface.interior_fine_nodes.size() == 361);
    }
  }

  TEST_CASE("triangles are counterclockwise and tile the box") {
    const StructuredTriMesh m = build_rect_mesh({0.5, 1.5, 2.5, 3.5}, 0.25);
    double area = 0.0;
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      CHECK(m.signed_area(t) > 0.0);
      area += m.signed_area(t);
    }
    CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("node tags follow the boundary kind") {
    const StructuredTriMesh d = build_rect_mesh({0, 1, 0, 1}, 0.5, BoundaryKind::dirichlet);
    const StructuredTriMesh i = build_rect_mesh({0, 1, 0, 1}, 0.5, BoundaryKind::interface);
    CHECK(std::count(d.node_tags.begin(), d.node_tags.end(), NodeTag::dirichlet) == 8);
    CHECK(std::count(i.node_tags.begin(), i.node_tags.end(), NodeTag::interface) == 8);
    CHECK(d.node_tags[d.node_index(1, 1)] == NodeTag::interior);
    CHECK(d.boundary_loop().size() == 8);
    CHECK(d.boundary_loop().front() == d.node_index(0, 0));
  }

  TEST_CASE("non-divisible spacing is rejected") {
    CHECK_THROWS_AS(build_rect_mesh({0, 1, 0, 1}, 0.3), MeshError);
    CHECK_THROWS_AS(build_rect_mesh({0, 1, 0, 1}, -0.1), MeshError);
  }

  TEST_CASE("partition counts") {
    const Bench b = make_bench();
    const std::vector<int> regions = partition_global(b.global, b.layout);
    std::vector<int> count(8, 0);
    int exterior = 0;
    for (int r : regions) {
      if (r == kExterior) {
        ++exterior;
      } else {
        ++count[r];
      }
    }
    for (int c : count) CHECK(c == 200);
    CHECK(exterior == 6400 - 1600);
  }

  TEST_CASE("patch off the coarse grid is rejected") {
    const StructuredTriMesh g = build_rect_mesh({0, 2, 0, 16}, 0.1);
    PatchLayout layout = benchmark_layout(isotropic_weights(1));
    layout.patch_boxes[0].x_min = 0.55;
    CHECK_THROWS_AS(partition_global(g, layout), MeshError);
  }

  TEST_CASE("layout validation") {
    PatchLayout layout = benchmark_layout(isotropic_weights(8));
    CHECK_NOTHROW(layout.validate({0, 2, 0, 16}));
    CHECK_THROWS_AS(layout.validate({0, 2, 0, 10}), ConfigError);
    layout.inclusion_boxes[3] = layout.patch_boxes[3];
    CHECK_THROWS_AS(layout.validate({0, 2, 0, 16}), ConfigError);
  }

  TEST_CASE("prolongation interpolates linear functions exactly") {
    const Bench b = make_bench();
    for (std::size_t q = 0; q < 8; ++q) {
      const auto& iface = b.map.patches[q];
      Eigen::VectorXd coarse(static_cast<Eigen::Index>(iface.coarse_nodes.size()));
      for (std::size_t k = 0; k < iface.coarse_nodes.size(); ++k) {
        const Point2 p = b.global.nodes[iface.coarse_nodes[k]];
        coarse[k] = 2.0 * p.x - 0.3 * p.y + 1.0;
      }
      const Eigen::VectorXd fine = iface.prolongation * coarse;
      for (std::size_t k = 0; k < iface.fine_nodes.size(); ++k) {
        const Point2 p = b.patches[q].nodes[iface.fine_nodes[k]];
        CHECK(fine[k] == doctest::Approx(2.0 * p.x - 0.3 * p.y + 1.0).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("prolongation is the identity for matching meshes") {
    const Bench b = make_bench(0.1);
    const auto& iface = b.map.patches[0];
    CHECK(iface.fine_nodes.size() == iface.coarse_nodes.size());
    const Eigen::MatrixXd p = Eigen::MatrixXd(iface.prolongation);
    CHECK((p - Eigen::MatrixXd::Identity(p.rows(), p.cols())).norm() == 0.0);
  }

  TEST_CASE("interior coarse nodes coincide with fine nodes") {
    const Bench b = make_bench();
    for (std::size_t q = 0; q < 8; ++q) {
      const auto& iface = b.map.patches[q];
      for (std::size_t i = 0; i < iface.interior_coarse_nodes.size(); ++i) {
        const Point2 c = b.global.nodes[iface.interior_coarse_nodes[i]];
        const Point2 f = b.patches[q].nodes[iface.coarse_to_fine_interior[i]];
        CHECK(std::abs(c.x - f.x) < 1e-12);
        CHECK(std::abs(c.y - f.y) < 1e-12);
      }
    }
  }

  TEST_CASE("non-nested patch mesh is rejected") {
    Bench b = make_bench();
    b.patches[2] = build_rect_mesh(b.layout.patch_boxes[2], 0.04, BoundaryKind::interface);
    CHECK_THROWS_AS(build_interface_map(b.global, b.patches, b.layout), MeshError);
  }

  TEST_CASE("vtk writer emits the declared counts") {
    const StructuredTriMesh m = build_rect_mesh({0, 1, 0, 1}, 0.5);
    std::ostringstream os;
    write_vtk_mesh(os, m, "unit square");
    const std::string s = os.str();
    CHECK(s.find("POINTS 9 double") != std::string::npos);
    CHECK(s.find("CELLS 8 32") != std::string::npos);
  }
}
