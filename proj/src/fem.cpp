/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

bool active(std::span<const char> mask, std::size_t t) { return mask.empty() || mask[t] != 0; }

void check_sizes(const StructuredTriMesh& mesh, std::span<const double> values,
                 std::span<const char> mask) {
  if (!values.empty() && values.size() != mesh.num_triangles()) {
    throw AssemblyError("coefficient field size does not match element count");
  }
  if (!mask.empty() && mask.size() != mesh.num_triangles()) {
    throw AssemblyError("element mask size does not match element count");
  }
}

int find_slot(const SpMat& m, int row, int col) {
  const int* inner = m.innerIndexPtr();
  const int begin = m.outerIndexPtr()[col];
  const int end = m.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(inner + begin, inner + end, row);
  return static_cast<int>(it - inner);
}

using Polygon = std::vector<Point2>;

// One Sutherland-Hodgman pass against the half plane sign * (coord - bound) >= 0.
Polygon clip(const Polygon& poly, bool use_x, double bound, double sign) {
  Polygon out;
  const std::size_t n = poly.size();
  auto dist = [&](const Point2& p) { return sign * ((use_x ? p.x : p.y) - bound); };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    const double da = dist(a);
    const double db = dist(b);
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) {
      const double s = da / (da - db);
      out.push_back({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
  }
  return out;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

SpMat assemble_scaled(const StructuredTriMesh& mesh, std::span<const double> coeff,
                      std::span<const char> mask, bool mass) {
  const ElementPattern pattern = make_element_pattern(mesh);
  SpMat m = pattern.zeros();
  double* values = m.valuePtr();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!active(mask, t)) continue;
    const double c = coeff.empty() ? 1.0 : coeff[t];
    if (c == 0.0) continue;
    if (mass) {
      const double a12 = mesh.signed_area(t) / 12.0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) values[pattern.slots[t][3 * a + b]] += c * a12 * (a == b ? 2.0 : 1.0);
      }
    } else {
      const auto ke = element_stiffness(mesh, t);
      for (int k = 0; k < 9; ++k) values[pattern.slots[t][k]] += c * ke[k];
    }
  }
  return m;
}

} // namespace

const TriangleQuadrature& degree4_rule() {
  static const TriangleQuadrature rule = [] {
    TriangleQuadrature q{};
    const double a1 = 0.108103018168070, b1 = 0.445948490915965;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771;
    const double w1 = 0.223381589678011, w2 = 0.109951743655322;
    q.bary = {{{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1}, {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}}};
    q.weight = {w1, w1, w1, w2, w2, w2};
    return q;
  }();
  return rule;
}

ElementPattern make_element_pattern(const StructuredTriMesh& mesh) {
  const int n = static_cast<int>(mesh.num_nodes());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.num_triangles());
  for (const auto& tri : mesh.triangles) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) trip.emplace_back(tri[a], tri[b], 0.0);
    }
  }
  ElementPattern p;
  p.matrix.resize(n, n);
  p.matrix.setFromTriplets(trip.begin(), trip.end());
  p.matrix.makeCompressed();
  p.slots.resize(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) p.slots[t][3 * a + b] = find_slot(p.matrix, tri[a], tri[b]);
    }
  }
  return p;
}

std::array<double, 9> element_stiffness(const StructuredTriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Point2& p0 = mesh.nodes[tri[0]];
  const Point2& p1 = mesh.nodes[tri[1]];
  const Point2& p2 = mesh.nodes[tri[2]];
  const double area = mesh.signed_area(t);
  if (!(area > 0.0)) throw AssemblyError("element " + std::to_string(t) + " has nonpositive area");
  const std::array<double, 3> bx = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
  const std::array<double, 3> by = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
  std::array<double, 9> k{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) k[3 * a + b] = (bx[a] * bx[b] + by[a] * by[b]) / (4.0 * area);
  }
  return k;
}

std::vector<double> inclusion_fraction(const StructuredTriMesh& mesh, const Box& box) {
  std::vector<double> frac(mesh.num_triangles(), 0.0);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    Polygon poly = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    poly = clip(poly, true, box.x_min, 1.0);
    if (!poly.empty()) poly = clip(poly, true, box.x_max, -1.0);
    if (!poly.empty()) poly = clip(poly, false, box.y_min, 1.0);
    if (!poly.empty()) poly = clip(poly, false, box.y_max, -1.0);
    if (poly.size() < 3) continue;
    const double f = polygon_area(poly) / mesh.signed_area(t);
    // Snap round-off so fully covered elements carry exactly 1.
    frac[t] = f > 1.0 - 1e-12 ? 1.0 : (f < 1e-12 ? 0.0 : f);
  }
  return frac;
}

SpMat assemble_stiffness(const StructuredTriMesh& mesh, std::span<const double> coeff,
                         std::span<const char> mask) {
  check_sizes(mesh, coeff, mask);
  for (std::size_t t = 0; t < coeff.size(); ++t) {
    if (active(mask, t) && !(coeff[t] > 0.0)) {
      throw AssemblyError("diffusion coefficient must be positive (element " +
                          std::to_string(t) + ")");
    }
  }
  return assemble_scaled(mesh, coeff, mask, false);
}

SpMat assemble_stiffness_part(const StructuredTriMesh& mesh, std::span<const double> weight,
                              std::span<const char> mask) {
  check_sizes(mesh, weight, mask);
  for (double w : weight) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw AssemblyError("stiffness weight must be nonnegative");
  }
  return assemble_scaled(mesh, weight, mask, false);
}

SpMat assemble_mass(const StructuredTriMesh& mesh, std::span<const double> weight,
                    std::span<const char> mask) {
  check_sizes(mesh, weight, mask);
  return assemble_scaled(mesh, weight, mask, true);
}

Vec assemble_load(const StructuredTriMesh& mesh, double f, std::span<const char> mask) {
  check_sizes(mesh, {}, mask);
  Vec l = Vec::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  if (f == 0.0) return l;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    if (!active(mask, t)) continue;
    const double share = f * mesh.signed_area(t) / 3.0;
    for (int v : mesh.triangles[t]) l[v] += share;
  }
  return l;
}

ReactionForm::ReactionForm(const StructuredTriMesh& mesh, std::span<const double> rate)
    : mesh_(&mesh) {
  check_sizes(mesh, rate, {});
  for (std::size_t t = 0; t < rate.size(); ++t) {
    if (!(rate[t] >= 0.0) || !std::isfinite(rate[t])) {
      throw AssemblyError("reaction rate must be nonnegative (element " + std::to_string(t) + ")");
    }
    if (rate[t] > 0.0) active_.push_back({t, mesh.triangles[t], rate[t] * mesh.signed_area(t)});
  }
}

Vec ReactionForm::apply(const Vec& w, double scale) const {
  Vec out = Vec::Zero(static_cast<Eigen::Index>(mesh_->num_nodes()));
  if (scale == 0.0) return out;
  const auto& rule = degree4_rule();
  for (const auto& e : active_) {
    const double w0 = w[e.nodes[0]], w1 = w[e.nodes[1]], w2 = w[e.nodes[2]];
    std::array<double, 3> acc{};
    for (int g = 0; g < TriangleQuadrature::size; ++g) {
      const auto& b = rule.bary[g];
      const double wh = b[0] * w0 + b[1] * w1 + b[2] * w2;
      const double c = rule.weight[g] * wh * wh * wh;
      acc[0] += c * b[0];
      acc[1] += c * b[1];
      acc[2] += c * b[2];
    }
    const double s = scale * e.weight;
    for (int a = 0; a < 3; ++a) out[e.nodes[a]] += s * acc[a];
  }
  return out;
}

void ReactionForm::add_jacobian(const Vec& w, double scale, const ElementPattern& pattern,
                                SpMat& target) const {
  if (scale == 0.0) return;
  const auto& rule = degree4_rule();
  double* values = target.valuePtr();
  for (const auto& e : active_) {
    const double w0 = w[e.nodes[0]], w1 = w[e.nodes[1]], w2 = w[e.nodes[2]];
    std::array<double, 9> acc{};
    for (int g = 0; g < TriangleQuadrature::size; ++g) {
      const auto& b = rule.bary[g];
      const double wh = b[0] * w0 + b[1] * w1 + b[2] * w2;
      const double c = rule.weight[g] * wh * wh;
      for (int a = 0; a < 3; ++a) {
        for (int d = 0; d < 3; ++d) acc[3 * a + d] += c * b[a] * b[d];
      }
    }
    const double s = 3.0 * scale * e.weight;
    const auto& slot = pattern.slots[e.index];
    for (int k = 0; k < 9; ++k) values[slot[k]] += s * acc[k];
  }
}

SpMat ReactionForm::jacobian(const Vec& w, double scale) const {
  const ElementPattern pattern = make_element_pattern(*mesh_);
  SpMat j = pattern.zeros();
  add_jacobian(w, scale, pattern, j);
  return j;
}

Vec assemble_reaction(const StructuredTriMesh& mesh, std::span<const double> rate, const Vec& w) {
  return ReactionForm(mesh, rate).apply(w, 1.0);
}

SpMat assemble_reaction_jacobian(const StructuredTriMesh& mesh, std::span<const double> rate,
                                 const Vec& w) {
  return ReactionForm(mesh, rate).jacobian(w, 1.0);
}

CouplingOperators assemble_coupling(const StructuredTriMesh& global,
                                    const StructuredTriMesh& patch, const PatchInterface& iface) {
  const int nf = static_cast<int>(iface.fine_nodes.size());
  if (nf < 3) throw AssemblyError("interface must be a closed curve with at least three nodes");
  CouplingOperators ops;
  ops.interface_mass = Eigen::MatrixXd::Zero(nf, nf);
  for (int k = 0; k < nf; ++k) {
    const int k1 = (k + 1) % nf;
    const Point2& a = patch.nodes[iface.fine_nodes[k]];
    const Point2& b = patch.nodes[iface.fine_nodes[k1]];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    ops.interface_mass(k, k) += len / 3.0;
    ops.interface_mass(k1, k1) += len / 3.0;
    ops.interface_mass(k, k1) += len / 6.0;
    ops.interface_mass(k1, k) += len / 6.0;
  }

  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      const double v = ops.interface_mass(i, j);
      if (v != 0.0) trip.emplace_back(iface.fine_nodes[i], j, v);
    }
  }
  ops.fine.resize(static_cast<Eigen::Index>(patch.num_nodes()), nf);
  ops.fine.setFromTriplets(trip.begin(), trip.end());

  const SpMat pt = SpMat(iface.prolongation).transpose();
  const Eigen::MatrixXd reduced = pt * ops.interface_mass;  // nc x nf
  trip.clear();
  for (Eigen::Index c = 0; c < reduced.rows(); ++c) {
    for (int j = 0; j < nf; ++j) {
      const double v = reduced(c, j);
      if (v != 0.0) trip.emplace_back(iface.coarse_nodes[c], j, v);
    }
  }
  ops.coarse.resize(static_cast<Eigen::Index>(global.num_nodes()), nf);
  ops.coarse.setFromTriplets(trip.begin(), trip.end());
  return ops;
}

GramMatrices gram_matrices(const StructuredTriMesh& mesh, std::span<const char> mask) {
  GramMatrices g;
  g.l2 = assemble_mass(mesh, {}, mask);
  g.h1 = g.l2 + assemble_scaled(mesh, {}, mask, false);
  return g;
}

DofRestriction::DofRestriction(const SpMat& full_pattern, std::vector<int> kept)
    : kept_(std::move(kept)), full_to_reduced_(full_pattern.rows(), -1) {
  for (std::size_t r = 0; r < kept_.size(); ++r) full_to_reduced_[kept_[r]] = static_cast<int>(r);
  const int n = static_cast<int>(kept_.size());
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> source;
  for (int col = 0; col < full_pattern.outerSize(); ++col) {
    const int rc = full_to_reduced_[col];
    if (rc < 0) continue;
    for (int k = full_pattern.outerIndexPtr()[col]; k < full_pattern.outerIndexPtr()[col + 1]; ++k) {
      const int rr = full_to_reduced_[full_pattern.innerIndexPtr()[k]];
      if (rr >= 0) trip.emplace_back(rr, rc, 0.0);
    }
  }
  reduced_pattern_.resize(n, n);
  reduced_pattern_.setFromTriplets(trip.begin(), trip.end());
  reduced_pattern_.makeCompressed();
  value_map_.assign(reduced_pattern_.nonZeros(), -1);
  for (int col = 0; col < full_pattern.outerSize(); ++col) {
    const int rc = full_to_reduced_[col];
    if (rc < 0) continue;
    for (int k = full_pattern.outerIndexPtr()[col]; k < full_pattern.outerIndexPtr()[col + 1]; ++k) {
      const int rr = full_to_reduced_[full_pattern.innerIndexPtr()[k]];
      if (rr >= 0) value_map_[find_slot(reduced_pattern_, rr, rc)] = k;
    }
  }
}

SpMat DofRestriction::restrict_matrix(const SpMat& full) const {
  SpMat reduced = reduced_pattern_;
  gather_values(full, reduced);
  return reduced;
}

void DofRestriction::gather_values(const SpMat& full, SpMat& reduced) const {
  const double* src = full.valuePtr();
  double* dst = reduced.valuePtr();
  for (std::size_t k = 0; k < value_map_.size(); ++k) dst[k] = src[value_map_[k]];
}

Vec DofRestriction::restrict_vector(const Vec& full) const {
  Vec r(static_cast<Eigen::Index>(kept_.size()));
  for (std::size_t i = 0; i < kept_.size(); ++i) r[i] = full[kept_[i]];
  return r;
}

Vec DofRestriction::extend_vector(const Vec& reduced, std::size_t full_size) const {
  Vec f = Vec::Zero(static_cast<Eigen::Index>(full_size));
  for (std::size_t i = 0; i < kept_.size(); ++i) f[kept_[i]] = reduced[i];
  return f;
}

} // namespace patchdd
