/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/postproc.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

bool is_zero(const MultiIndex& a) {
  return std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& nodes) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = v[nodes[k]];
  return out;
}

} // namespace

Moments moments(const MultiIndexSet& indices, const Eigen::MatrixXd& coeffs) {
  Moments out;
  out.mean = Eigen::VectorXd::Zero(coeffs.cols());
  out.variance = Eigen::VectorXd::Zero(coeffs.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto row = coeffs.row(static_cast<Eigen::Index>(k));
    if (is_zero(indices[k])) {
      out.mean += row.transpose();
    } else {
      out.variance += row.cwiseAbs2().transpose();
    }
  }
  return out;
}

Eigen::VectorXd first_order_variance(const MultiIndexSet& indices, const Eigen::MatrixXd& coeffs,
                                     std::size_t i) {
  if (i >= indices.dim()) throw ConfigError("sensitivity variable out of range");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coeffs.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const MultiIndex& a = indices[k];
    bool only_i = a[i] > 0;
    for (std::size_t j = 0; j < a.size() && only_i; ++j) only_i = j == i || a[j] == 0;
    if (only_i) out += coeffs.row(static_cast<Eigen::Index>(k)).cwiseAbs2().transpose();
  }
  return out;
}

SurfaceMesh extract_submesh(const StructuredTriMesh& mesh, const std::vector<char>& mask,
                            std::vector<int>* node_map) {
  SurfaceMesh out;
  std::vector<char> used(mesh.num_nodes(), 0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!mask[t]) continue;
    for (int v : mesh.triangles[t]) used[v] = 1;
  }
  std::vector<int> renumber(mesh.num_nodes(), -1);
  std::vector<int> map;
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    if (used[n]) {
      renumber[n] = static_cast<int>(map.size());
      map.push_back(static_cast<int>(n));
      out.points.push_back(mesh.nodes[n]);
    }
  }
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!mask[t]) continue;
    const auto& tri = mesh.triangles[t];
    out.triangles.push_back({renumber[tri[0]], renumber[tri[1]], renumber[tri[2]]});
  }
  if (node_map) *node_map = std::move(map);
  return out;
}

MultiscaleStats multiscale_statistics(const GlobalLocalProblem& problem, const PceField& u,
                                      const std::vector<PceApprox>& w) {
  const std::size_t nq = problem.num_patches();
  const std::size_t m = problem.stochastic_dim();
  if (w.size() != nq) throw ConfigError("multiscale field needs one local solution per patch");
  if (static_cast<std::size_t>(u.coeffs.cols()) != problem.global_mesh().num_nodes()) {
    throw ConfigError("global field does not match the global mesh");
  }

  MultiscaleStats out;
  std::vector<char> ext_mask(problem.regions().size());
  for (std::size_t t = 0; t < ext_mask.size(); ++t) ext_mask[t] = problem.regions()[t] == kExterior;
  out.exterior = extract_submesh(problem.global_mesh(), ext_mask, &out.exterior_nodes);

  const Moments gm = moments(u.indices, u.coeffs);
  out.exterior_moments.mean = gather(gm.mean, out.exterior_nodes);
  out.exterior_moments.variance = gather(gm.variance, out.exterior_nodes);

  std::size_t total = 0;
  for (std::size_t q = 0; q < nq; ++q) {
    const StructuredTriMesh& pm = problem.patch(q).mesh();
    if (static_cast<std::size_t>(w[q].coeffs.cols()) != pm.num_nodes()) {
      throw ConfigError("local solution " + std::to_string(q + 1) + " does not match its patch mesh");
    }
    out.patch_offsets.push_back(total);
    for (const auto& p : pm.nodes) out.patches.points.push_back(p);
    for (const auto& t : pm.triangles) {
      const int o = static_cast<int>(total);
      out.patches.triangles.push_back({t[0] + o, t[1] + o, t[2] + o});
    }
    total += pm.num_nodes();
  }
  out.patch_moments.mean.resize(static_cast<Eigen::Index>(total));
  out.patch_moments.variance.resize(static_cast<Eigen::Index>(total));
  for (std::size_t q = 0; q < nq; ++q) {
    const Moments pmom = moments(w[q].indices, w[q].coeffs);
    const auto o = static_cast<Eigen::Index>(out.patch_offsets[q]);
    out.patch_moments.mean.segment(o, pmom.mean.size()) = pmom.mean;
    out.patch_moments.variance.segment(o, pmom.variance.size()) = pmom.variance;
  }

  out.max_variance = std::max(out.exterior_moments.variance.size() ? out.exterior_moments.variance.maxCoeff() : 0.0,
                              out.patch_moments.variance.size() ? out.patch_moments.variance.maxCoeff() : 0.0);
  out.deterministic = !(out.max_variance > 0.0);
  const double scale = out.deterministic ? 0.0 : 1.0 / out.max_variance;

  for (std::size_t i = 0; i < m; ++i) {
    out.exterior_sensitivity.push_back(
        scale * gather(first_order_variance(u.indices, u.coeffs, i), out.exterior_nodes));
    Eigen::VectorXd ps(static_cast<Eigen::Index>(total));
    for (std::size_t q = 0; q < nq; ++q) {
      const Eigen::VectorXd v = first_order_variance(w[q].indices, w[q].coeffs, i);
      ps.segment(static_cast<Eigen::Index>(out.patch_offsets[q]), v.size()) = scale * v;
    }
    out.patch_sensitivity.push_back(std::move(ps));
  }
  return out;
}

void write_vtk(std::ostream& os, const SurfaceMesh& mesh, const std::string& title,
               const std::vector<NamedField>& fields) {
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os.precision(17);
  os << "POINTS " << mesh.points.size() << " double\n";
  for (const auto& p : mesh.points) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh.triangles.size() << ' ' << 4 * mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << mesh.triangles.size() << '\n';
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) os << "5\n";
  if (fields.empty()) return;
  os << "POINT_DATA " << mesh.points.size() << '\n';
  for (const auto& [name, values] : fields) {
    if (static_cast<std::size_t>(values.size()) != mesh.points.size()) {
      throw IoError("field '" + name + "' does not match the point count");
    }
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index k = 0; k < values.size(); ++k) os << values[k] << '\n';
  }
}

void write_nodal_csv(std::ostream& os, const SurfaceMesh& mesh, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != mesh.points.size()) {
    throw IoError("values do not match the point count");
  }
  os.precision(17);
  os << "node,x,y,value\n";
  for (std::size_t k = 0; k < mesh.points.size(); ++k) {
    os << k << ',' << mesh.points[k].x << ',' << mesh.points[k].y << ',' << values[static_cast<Eigen::Index>(k)] << '\n';
  }
}

} // namespace patchdd
