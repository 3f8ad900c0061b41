/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/mesh.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

int divisions(double length, double spacing, const char* what) {
  if (!(spacing > 0.0) || !(length > 0.0)) {
    throw MeshError(std::string("non-positive ") + what + " length or element size");
  }
  const double ratio = length / spacing;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-12 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << what << " length " << length << " is not an integer multiple of element size "
        << spacing;
    throw MeshError(msg.str());
  }
  return static_cast<int>(rounded);
}

bool on_grid_line(double value, double origin, double spacing) {
  const double k = std::round((value - origin) / spacing);
  return std::abs(value - (origin + k * spacing)) <= kMeshLineTol;
}

int grid_index(double value, double origin, double spacing) {
  return static_cast<int>(std::lround((value - origin) / spacing));
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.x_min < b.x_max && b.x_min < a.x_max && a.y_min < b.y_max && b.y_min < a.y_max;
}

} // namespace

double StructuredTriMesh::signed_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point2& a = nodes[tri[0]];
  const Point2& b = nodes[tri[1]];
  const Point2& c = nodes[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point2 StructuredTriMesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return {(nodes[tri[0]].x + nodes[tri[1]].x + nodes[tri[2]].x) / 3.0,
          (nodes[tri[0]].y + nodes[tri[1]].y + nodes[tri[2]].y) / 3.0};
}

std::vector<int> StructuredTriMesh::boundary_loop() const {
  std::vector<int> loop;
  loop.reserve(2 * (nx + ny));
  for (int i = 0; i < nx; ++i) loop.push_back(node_index(i, 0));
  for (int j = 0; j < ny; ++j) loop.push_back(node_index(nx, j));
  for (int i = nx; i > 0; --i) loop.push_back(node_index(i, ny));
  for (int j = ny; j > 0; --j) loop.push_back(node_index(0, j));
  return loop;
}

StructuredTriMesh build_rect_mesh(const Box& box, double spacing, BoundaryKind boundary,
                                  std::string id) {
  StructuredTriMesh mesh;
  mesh.id = std::move(id);
  mesh.box = box;
  mesh.spacing = spacing;
  mesh.nx = divisions(box.width(), spacing, "x");
  mesh.ny = divisions(box.height(), spacing, "y");

  const int nxp = mesh.nx + 1;
  const int nyp = mesh.ny + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(nxp) * nyp);
  mesh.node_tags.reserve(mesh.nodes.capacity());
  const NodeTag edge_tag = boundary == BoundaryKind::dirichlet ? NodeTag::dirichlet
                                                               : NodeTag::interface;
  for (int j = 0; j < nyp; ++j) {
    // Pin the last row/column to the box edge so no rounding drift accumulates.
    const double y = j == mesh.ny ? box.y_max : box.y_min + j * spacing;
    for (int i = 0; i < nxp; ++i) {
      const double x = i == mesh.nx ? box.x_max : box.x_min + i * spacing;
      mesh.nodes.push_back({x, y});
      const bool on_edge = i == 0 || j == 0 || i == mesh.nx || j == mesh.ny;
      mesh.node_tags.push_back(on_edge ? edge_tag : NodeTag::interior);
    }
  }

  mesh.triangles.reserve(2 * static_cast<std::size_t>(mesh.nx) * mesh.ny);
  for (int j = 0; j < mesh.ny; ++j) {
    for (int i = 0; i < mesh.nx; ++i) {
      const int n00 = mesh.node_index(i, j);
      const int n10 = mesh.node_index(i + 1, j);
      const int n01 = mesh.node_index(i, j + 1);
      const int n11 = mesh.node_index(i + 1, j + 1);
      mesh.triangles.push_back({n00, n10, n11});
      mesh.triangles.push_back({n00, n11, n01});
    }
  }
  return mesh;
}

void PatchLayout::validate(const Box& domain) const {
  if (inclusion_boxes.size() != patch_boxes.size() || weights.size() != patch_boxes.size()) {
    throw ConfigError("patch layout: patch, inclusion and weight counts differ");
  }
  for (std::size_t q = 0; q < size(); ++q) {
    const Box& p = patch_boxes[q];
    const Box& s = inclusion_boxes[q];
    if (!(p.width() > 0.0 && p.height() > 0.0)) {
      throw ConfigError("patch " + std::to_string(q + 1) + " has empty extent");
    }
    if (!(p.x_min > domain.x_min && p.x_max < domain.x_max && p.y_min > domain.y_min &&
          p.y_max < domain.y_max)) {
      throw ConfigError("patch " + std::to_string(q + 1) +
                        " must lie strictly inside the domain");
    }
    if (!(s.x_min > p.x_min && s.x_max < p.x_max && s.y_min > p.y_min && s.y_max < p.y_max) ||
        !(s.width() > 0.0 && s.height() > 0.0)) {
      throw ConfigError("inclusion " + std::to_string(q + 1) +
                        " must lie strictly inside its patch");
    }
    if (!(weights[q] >= 0.0 && weights[q] <= 1.0)) {
      throw ConfigError("weight " + std::to_string(q + 1) + " outside [0,1]");
    }
    for (std::size_t r = 0; r < q; ++r) {
      if (boxes_overlap(p, patch_boxes[r])) {
        throw ConfigError("patches " + std::to_string(r + 1) + " and " + std::to_string(q + 1) +
                          " overlap");
      }
    }
  }
}

PatchLayout benchmark_layout(std::span<const double> weights) {
  PatchLayout layout;
  for (std::size_t q = 1; q <= weights.size(); ++q) {
    const double c = 2.0 * static_cast<double>(q);
    layout.patch_boxes.push_back({0.5, 1.5, c - 1.5, c - 0.5});
    layout.inclusion_boxes.push_back({0.75, 1.25, c - 1.25, c - 0.75});
    layout.weights.push_back(weights[q - 1]);
  }
  return layout;
}

std::vector<double> isotropic_weights(std::size_t count) {
  return std::vector<double>(count, 1.0);
}

std::vector<double> anisotropic_weights(std::size_t count) {
  std::vector<double> w(count);
  for (std::size_t q = 1; q <= count; ++q) w[q - 1] = 1.0 - 0.1 * static_cast<double>(q + 1);
  return w;
}

std::vector<int> partition_global(const StructuredTriMesh& mesh, const PatchLayout& layout) {
  const double x0 = mesh.box.x_min;
  const double y0 = mesh.box.y_min;
  for (std::size_t q = 0; q < layout.size(); ++q) {
    const Box& p = layout.patch_boxes[q];
    if (!on_grid_line(p.x_min, x0, mesh.spacing) || !on_grid_line(p.x_max, x0, mesh.spacing) ||
        !on_grid_line(p.y_min, y0, mesh.spacing) || !on_grid_line(p.y_max, y0, mesh.spacing)) {
      throw MeshError("boundary of patch " + std::to_string(q + 1) +
                      " cuts elements of the global mesh");
    }
  }
  std::vector<int> region(mesh.num_triangles(), kExterior);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Point2 c = mesh.centroid(t);
    for (std::size_t q = 0; q < layout.size(); ++q) {
      if (layout.patch_boxes[q].contains(c)) {
        region[t] = static_cast<int>(q);
        break;
      }
    }
  }
  return region;
}

InterfaceMap build_interface_map(const StructuredTriMesh& global,
                                 std::span<const StructuredTriMesh> patch_meshes,
                                 const PatchLayout& layout) {
  if (patch_meshes.size() != layout.size()) {
    throw MeshError("one patch mesh per patch is required");
  }
  InterfaceMap map;
  map.patches.resize(layout.size());
  const double H = global.spacing;
  for (std::size_t q = 0; q < layout.size(); ++q) {
    const StructuredTriMesh& fine = patch_meshes[q];
    const Box& pbox = layout.patch_boxes[q];
    const double ratio = H / fine.spacing;
    const double r_round = std::round(ratio);
    if (r_round < 1.0 || std::abs(ratio - r_round) > 1e-9) {
      throw MeshError("patch mesh " + std::to_string(q + 1) +
                      " is not a nested refinement: h does not divide H");
    }
    const double tol = kMeshLineTol;
    if (std::abs(fine.box.x_min - pbox.x_min) > tol || std::abs(fine.box.x_max - pbox.x_max) > tol ||
        std::abs(fine.box.y_min - pbox.y_min) > tol || std::abs(fine.box.y_max - pbox.y_max) > tol) {
      throw MeshError("patch mesh " + std::to_string(q + 1) + " does not cover its patch");
    }
    if (!on_grid_line(pbox.x_min, global.box.x_min, H) ||
        !on_grid_line(pbox.y_min, global.box.y_min, H) ||
        !on_grid_line(pbox.x_max, global.box.x_min, H) ||
        !on_grid_line(pbox.y_max, global.box.y_min, H)) {
      throw MeshError("patch " + std::to_string(q + 1) + " is not aligned with the global mesh");
    }
    const int r = static_cast<int>(r_round);
    const int i0 = grid_index(pbox.x_min, global.box.x_min, H);
    const int j0 = grid_index(pbox.y_min, global.box.y_min, H);
    const int cx = grid_index(pbox.x_max, global.box.x_min, H) - i0;
    const int cy = grid_index(pbox.y_max, global.box.y_min, H) - j0;
    if (fine.nx != r * cx || fine.ny != r * cy) {
      throw MeshError("patch mesh " + std::to_string(q + 1) + " is not nested in the global mesh");
    }

    PatchInterface& pi = map.patches[q];
    for (int i = 0; i < cx; ++i) pi.coarse_nodes.push_back(global.node_index(i0 + i, j0));
    for (int j = 0; j < cy; ++j) pi.coarse_nodes.push_back(global.node_index(i0 + cx, j0 + j));
    for (int i = cx; i > 0; --i) pi.coarse_nodes.push_back(global.node_index(i0 + i, j0 + cy));
    for (int j = cy; j > 0; --j) pi.coarse_nodes.push_back(global.node_index(i0, j0 + j));
    pi.fine_nodes = fine.boundary_loop();

    // Fine node k sits between coarse nodes k / r and k / r + 1 along the loop.
    const int nc = static_cast<int>(pi.coarse_nodes.size());
    const int nf = static_cast<int>(pi.fine_nodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * nf);
    for (int k = 0; k < nf; ++k) {
      const int c = k / r;
      const int s = k % r;
      if (s == 0) {
        trip.emplace_back(k, c, 1.0);
      } else {
        const double t = static_cast<double>(s) / r;
        trip.emplace_back(k, c, 1.0 - t);
        trip.emplace_back(k, (c + 1) % nc, t);
      }
    }
    pi.prolongation.resize(nf, nc);
    pi.prolongation.setFromTriplets(trip.begin(), trip.end());

    for (int j = 1; j < cy; ++j) {
      for (int i = 1; i < cx; ++i) {
        pi.interior_coarse_nodes.push_back(global.node_index(i0 + i, j0 + j));
        pi.coarse_to_fine_interior.push_back(fine.node_index(r * i, r * j));
      }
    }
    for (std::size_t n = 0; n < fine.num_nodes(); ++n) {
      if (fine.node_tags[n] == NodeTag::interior) pi.interior_fine_nodes.push_back(static_cast<int>(n));
    }
  }
  return map;
}

void write_vtk_mesh(std::ostream& os, const StructuredTriMesh& mesh, const std::string& title) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os.precision(17);
  os << "POINTS " << mesh.num_nodes() << " double\n";
  for (const auto& p : mesh.nodes) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) os << "5\n";
}

} // namespace patchdd
