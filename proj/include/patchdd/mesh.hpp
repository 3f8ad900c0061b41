/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace patchdd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle (x_min, x_max) x (y_min, y_max).
struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double perimeter() const { return 2.0 * (width() + height()); }
  bool contains(Point2 p, double tol = 0.0) const {
    return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol && p.y <= y_max + tol;
  }
  bool strictly_contains(Point2 p, double tol) const {
    return p.x > x_min + tol && p.x < x_max - tol && p.y > y_min + tol && p.y < y_max - tol;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

enum class NodeTag : std::uint8_t { interior, dirichlet, interface };

/// What the outer boundary of a rectangle mesh represents.
enum class BoundaryKind : std::uint8_t { dirichlet, interface };

/// Tolerance for deciding whether a coordinate lies on a mesh line.
inline constexpr double kMeshLineTol = 1e-9;

/// Regular criss-cross triangulation of a rectangle. Node (i, j) has index
/// j * (nx + 1) + i; every square cell is split along its lower-left to
/// upper-right diagonal into two counterclockwise triangles.
struct StructuredTriMesh {
  std::string id;
  Box box;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Point2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<NodeTag> node_tags;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  double signed_area(std::size_t t) const;
  Point2 centroid(std::size_t t) const;
  /// Node ids on the outer boundary, counterclockwise from the lower-left corner.
  std::vector<int> boundary_loop() const;
};

StructuredTriMesh build_rect_mesh(const Box& box, double spacing,
                                  BoundaryKind boundary = BoundaryKind::dirichlet,
                                  std::string id = {});

/// Patches Lambda_q, the uncertain inclusions Lambda*_q inside them and the
/// per-patch uncertainty weights gamma_q.
struct PatchLayout {
  std::vector<Box> patch_boxes;
  std::vector<Box> inclusion_boxes;
  std::vector<double> weights;

  std::size_t size() const { return patch_boxes.size(); }
  /// Throws ConfigError when patches overlap, touch the domain boundary or
  /// inclusions are not strictly inside their patch.
  void validate(const Box& domain) const;
};

/// Eight unit squares stacked along y inside (0,2)x(0,16), each with a
/// centred 0.5 x 0.5 inclusion.
PatchLayout benchmark_layout(std::span<const double> weights);
std::vector<double> isotropic_weights(std::size_t count);
/// gamma_q = 1 - 0.1 (q + 1) for q = 1..count.
std::vector<double> anisotropic_weights(std::size_t count);

inline constexpr int kExterior = -1;

/// Tag each triangle with the index of the fictitious patch containing it, or
/// kExterior. Throws MeshError if a patch boundary is not on mesh lines.
std::vector<int> partition_global(const StructuredTriMesh& mesh, const PatchLayout& layout);

/// Coarse/fine node correspondence along the closed interface Gamma_q.
struct PatchInterface {
  std::vector<int> coarse_nodes;           ///< global mesh ids, counterclockwise
  std::vector<int> fine_nodes;             ///< patch mesh ids, counterclockwise
  Eigen::SparseMatrix<double, Eigen::RowMajor> prolongation; ///< fine x coarse
  std::vector<int> interior_coarse_nodes;  ///< global ids strictly inside the patch
  std::vector<int> interior_fine_nodes;    ///< patch ids not on Gamma_q
  /// coarse interior node -> coincident patch node
  std::vector<int> coarse_to_fine_interior;
};

struct InterfaceMap {
  std::vector<PatchInterface> patches;
};

/// Requires each patch mesh to be a nested refinement (h divides H) of the
/// global mesh restricted to the patch box.
InterfaceMap build_interface_map(const StructuredTriMesh& global,
                                 std::span<const StructuredTriMesh> patch_meshes,
                                 const PatchLayout& layout);

/// Legacy ASCII VTK unstructured grid, triangle cells (type 5).
void write_vtk_mesh(std::ostream& os, const StructuredTriMesh& mesh, const std::string& title);

} // namespace patchdd
