/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "patchdd/mesh.hpp"

namespace patchdd {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Symmetric 6-point rule of degree 4 on a triangle. Weights sum to 1.
struct TriangleQuadrature {
  static constexpr int size = 6;
  std::array<std::array<double, 3>, size> bary;
  std::array<double, size> weight;
};
const TriangleQuadrature& degree4_rule();

/// Sparsity pattern shared by every P1 operator on one mesh. Each element owns
/// nine slots in the value array, so operators can be reassembled in place.
struct ElementPattern {
  SpMat matrix;                            ///< all values zero
  std::vector<std::array<int, 9>> slots;   ///< element, 3*a+b -> value index

  /// Zero-valued copy ready to be filled through the slots.
  SpMat zeros() const { return matrix; }
};
ElementPattern make_element_pattern(const StructuredTriMesh& mesh);

/// Element matrix of integral grad(phi_a).grad(phi_b) for unit coefficient.
std::array<double, 9> element_stiffness(const StructuredTriMesh& mesh, std::size_t t);

/// Fraction of each triangle's area lying inside box (the indicator chi).
std::vector<double> inclusion_fraction(const StructuredTriMesh& mesh, const Box& box);

/// Per-element integral of coeff * grad phi_i . grad phi_j. Elements whose
/// mask entry is 0 contribute nothing; an empty mask selects every element.
/// Throws AssemblyError if an active coefficient is not strictly positive.
SpMat assemble_stiffness(const StructuredTriMesh& mesh, std::span<const double> coeff,
                         std::span<const char> mask = {});
/// As assemble_stiffness but accepts nonnegative weights; used for the
/// parameter-dependent part of a diffusion operator.
SpMat assemble_stiffness_part(const StructuredTriMesh& mesh, std::span<const double> weight,
                              std::span<const char> mask = {});

/// P1 mass matrix weighted per element.
SpMat assemble_mass(const StructuredTriMesh& mesh, std::span<const double> weight = {},
                    std::span<const char> mask = {});

/// Nodal load vector of a constant source f over the active elements.
Vec assemble_load(const StructuredTriMesh& mesh, double f, std::span<const char> mask = {});

/// Cubic reaction term n(w, v) = integral R w^3 v with R piecewise constant.
class ReactionForm {
public:
  /// rate: per-element R at unit scale. Throws AssemblyError on negative values.
  ReactionForm(const StructuredTriMesh& mesh, std::span<const double> rate);

  /// N(w) with every rate multiplied by scale (scale >= 0).
  Vec apply(const Vec& w, double scale) const;
  /// Adds 3 * scale * integral R w^2 phi_i phi_j into target, which must carry
  /// the element pattern of the mesh.
  void add_jacobian(const Vec& w, double scale, const ElementPattern& pattern, SpMat& target) const;
  SpMat jacobian(const Vec& w, double scale) const;
  bool empty() const { return active_.empty(); }

private:
  struct ActiveElement {
    std::size_t index;
    std::array<int, 3> nodes;
    double weight;  // rate * area
  };
  const StructuredTriMesh* mesh_;
  std::vector<ActiveElement> active_;
};

/// Convenience wrappers around ReactionForm.
Vec assemble_reaction(const StructuredTriMesh& mesh, std::span<const double> rate, const Vec& w);
SpMat assemble_reaction_jacobian(const StructuredTriMesh& mesh, std::span<const double> rate,
                                 const Vec& w);

/// Interface coupling for one patch with multiplier space equal to the fine trace space.
struct CouplingOperators {
  Eigen::MatrixXd interface_mass;  ///< nf x nf 1D P1 mass on the fine polyline
  SpMat fine;                      ///< patch nodes x nf
  SpMat coarse;                    ///< global nodes x nf, equals P^T interface_mass on Gamma rows
};
CouplingOperators assemble_coupling(const StructuredTriMesh& global,
                                    const StructuredTriMesh& patch, const PatchInterface& iface);

struct GramMatrices {
  SpMat l2;
  SpMat h1;
};
GramMatrices gram_matrices(const StructuredTriMesh& mesh, std::span<const char> mask = {});

/// Reduced operator on a subset of dofs, keeping a map into the values of the
/// full operator so the restriction can be refreshed without searching.
class DofRestriction {
public:
  DofRestriction() = default;
  DofRestriction(const SpMat& full_pattern, std::vector<int> kept);

  const std::vector<int>& kept() const { return kept_; }
  /// -1 for dropped dofs.
  const std::vector<int>& full_to_reduced() const { return full_to_reduced_; }
  std::size_t size() const { return kept_.size(); }

  /// full must share the pattern used at construction.
  SpMat restrict_matrix(const SpMat& full) const;
  void gather_values(const SpMat& full, SpMat& reduced) const;
  Vec restrict_vector(const Vec& full) const;
  Vec extend_vector(const Vec& reduced, std::size_t full_size) const;

private:
  std::vector<int> kept_;
  std::vector<int> full_to_reduced_;
  SpMat reduced_pattern_;
  std::vector<int> value_map_;
};

} // namespace patchdd
