/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "patchdd/fem.hpp"
#include "patchdd/mesh.hpp"
#include "patchdd/sparse_poly.hpp"

namespace patchdd {

/// Material model of one patch: K = 1 + gamma * a * chi, R = s * gamma * b * chi,
/// where (a, b) = (xi_{2q-1}, xi_{2q}) unless fixed values are given.
struct CoefficientModel {
  double gamma = 1.0;
  double reaction_scale = 1.0;
  std::optional<double> fixed_diffusion;
  std::optional<double> fixed_reaction;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 50;
  int max_halvings = 10;
  bool operator==(const NewtonOptions&) const = default;
};

struct LocalSample {
  Vec w;        ///< patch nodal values
  Vec lambda;   ///< multiplier on the fine interface nodes
  int iterations = 0;
  double residual = 0.0;
};

/// Fine-scale operators of one patch. Immutable after construction.
class PatchProblem {
public:
  PatchProblem(int q, const StructuredTriMesh& global, StructuredTriMesh mesh,
               const PatchInterface& iface, const Box& inclusion, CoefficientModel model,
               double source);
  // The reaction form refers to the owned mesh, so instances stay in place.
  PatchProblem(const PatchProblem&) = delete;
  PatchProblem& operator=(const PatchProblem&) = delete;

  int index() const { return q_; }
  const StructuredTriMesh& mesh() const { return mesh_; }
  const PatchInterface& interface() const { return iface_; }
  const CouplingOperators& coupling() const { return coupling_; }
  const CoefficientModel& model() const { return model_; }
  const Vec& load() const { return load_; }
  const ElementPattern& pattern() const { return pattern_; }
  const DofRestriction& interior() const { return interior_; }
  const std::vector<double>& inclusion_fraction() const { return fraction_; }
  std::size_t num_interface() const { return iface_.fine_nodes.size(); }

  /// Positions of xi_{2q-1} and xi_{2q} (zero based).
  int diffusion_variable() const { return 2 * q_; }
  int reaction_variable() const { return 2 * q_ + 1; }
  double diffusion_amplitude(std::span<const double> xi) const;
  double reaction_amplitude(std::span<const double> xi) const;

  /// A(xi) on all patch nodes, sharing the element pattern.
  SpMat stiffness(std::span<const double> xi) const;
  const ReactionForm& reaction() const { return reaction_; }
  /// A(xi) w + N(w) - l on all patch nodes.
  Vec residual(std::span<const double> xi, const Vec& w) const;
  /// Multiplier from the interface rows of the residual: M_Gamma lambda = r_Gamma.
  Vec multiplier(const Vec& full_residual) const;

  /// Newton solve with w fixed to dirichlet on the interface. warm_interior, if
  /// given, seeds the interior dofs; otherwise the reaction-free solve does.
  /// Throws NewtonDivergedError.
  LocalSample solve(std::span<const double> xi, const Vec& dirichlet, const NewtonOptions& opts,
                    const Vec* warm_interior = nullptr) const;

private:
  int q_;
  StructuredTriMesh mesh_;
  PatchInterface iface_;
  CoefficientModel model_;
  std::vector<double> fraction_;
  ElementPattern pattern_;
  SpMat base_;      // unit diffusion
  SpMat inclusion_; // diffusion weighted by the inclusion fraction
  ReactionForm reaction_;
  Vec load_;
  CouplingOperators coupling_;
  Eigen::LLT<Eigen::MatrixXd> mass_llt_;
  DofRestriction interior_;
};

/// Fine Dirichlet data for patch q from a global nodal vector: P_q U on Gamma_q.
Vec interface_trace(const PatchInterface& iface, const Vec& global_values);

struct LocalFit {
  PceApprox w;
  PceApprox lambda;
  bool converged = false;
  std::size_t samples = 0;
  std::vector<int> newton_iterations;  ///< per sample evaluated in this call
};

/// Stochastic local step: adaptive fit of (w_q, lambda_q) as functions of xi
/// with Dirichlet data from a global chaos field. Keeps the converged interior
/// values of every sample to warm-start later calls for the same sample index.
class LocalStochasticSolver {
public:
  explicit LocalStochasticSolver(const PatchProblem& problem) : problem_(&problem) {}

  LocalFit solve(const PceField& global, std::size_t m, const AdaptiveParams& params,
                 const NewtonOptions& newton);

private:
  const PatchProblem* problem_;
  std::vector<Vec> warm_;
};

} // namespace patchdd
