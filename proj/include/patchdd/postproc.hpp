/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "patchdd/global_local.hpp"
#include "patchdd/mesh.hpp"
#include "patchdd/multi_index.hpp"

namespace patchdd {

/// Nodal mean and variance of an expansion on an orthonormal basis.
struct Moments {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

Moments moments(const MultiIndexSet& indices, const Eigen::MatrixXd& coeffs);

/// Variance of the conditional mean given xi_i: sum of squared coefficients
/// whose only nonzero entry is at position i (zero based).
Eigen::VectorXd first_order_variance(const MultiIndexSet& indices, const Eigen::MatrixXd& coeffs,
                                     std::size_t i);

/// Triangles and points of one exported dataset.
struct SurfaceMesh {
  std::vector<Point2> points;
  std::vector<std::array<int, 3>> triangles;
};

/// Triangles with mask[t] != 0, renumbered; node_map[k] is the source node of point k.
SurfaceMesh extract_submesh(const StructuredTriMesh& mesh, const std::vector<char>& mask,
                            std::vector<int>* node_map);

/// Multiscale field u = (U on the exterior coarse elements, w_q on the patches),
/// with statistics and normalized sensitivity indices on both parts.
struct MultiscaleStats {
  SurfaceMesh exterior;             ///< coarse exterior elements
  std::vector<int> exterior_nodes;  ///< global node of each exterior point
  SurfaceMesh patches;              ///< all fine patch meshes concatenated
  std::vector<std::size_t> patch_offsets;  ///< first point of each patch
  Moments exterior_moments;
  Moments patch_moments;
  /// sensitivity[i] on exterior / patch points, divided by the max variance.
  std::vector<Eigen::VectorXd> exterior_sensitivity;
  std::vector<Eigen::VectorXd> patch_sensitivity;
  double max_variance = 0.0;
  bool deterministic = false;  ///< zero variance everywhere: indices set to 0
};

/// Throws ConfigError when a patch solution is missing or has the wrong size.
MultiscaleStats multiscale_statistics(const GlobalLocalProblem& problem, const PceField& u,
                                      const std::vector<PceApprox>& w);

using NamedField = std::pair<std::string, Eigen::VectorXd>;

/// Legacy ASCII VTK with point data, values written with 17 significant digits.
void write_vtk(std::ostream& os, const SurfaceMesh& mesh, const std::string& title,
               const std::vector<NamedField>& fields);
/// CSV with header node,x,y,value.
void write_nodal_csv(std::ostream& os, const SurfaceMesh& mesh, const Eigen::VectorXd& values);

} // namespace patchdd
