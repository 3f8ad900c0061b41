/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseCholesky>

#include "patchdd/fem.hpp"
#include "patchdd/local_solver.hpp"
#include "patchdd/mesh.hpp"
#include "patchdd/sparse_poly.hpp"

namespace patchdd {

/// Diffusion used on the fictitious patches in the global operator.
enum class FictitiousRule {
  mean,   ///< 1 + gamma/2 on the inclusion: expectation of the patch diffusion
  unit,   ///< 1 everywhere
  fixed,  ///< 1 + gamma * a on the inclusion with the fixed diffusion input a
};

struct ProblemSetup {
  Box domain{0.0, 2.0, 0.0, 16.0};
  PatchLayout layout;
  double coarse_size = 0.1;
  double fine_size = 0.05;
  double source = 1.0;
  FictitiousRule fictitious = FictitiousRule::mean;
  std::vector<CoefficientModel> models;  ///< one per patch
};

/// Everything deterministic about one global/local configuration: meshes,
/// operators and the once-factorized global matrix.
class GlobalLocalProblem {
public:
  explicit GlobalLocalProblem(const ProblemSetup& setup);

  const ProblemSetup& setup() const { return setup_; }
  std::size_t num_patches() const { return patches_.size(); }
  /// Stochastic dimension m = 2Q.
  std::size_t stochastic_dim() const { return 2 * patches_.size(); }
  const StructuredTriMesh& global_mesh() const { return global_; }
  const std::vector<int>& regions() const { return regions_; }
  const InterfaceMap& interfaces() const { return interfaces_; }
  const PatchProblem& patch(std::size_t q) const { return *patches_[q]; }

  const SpMat& fictitious_operator() const { return c_full_; }   ///< C on the whole domain
  const SpMat& fictitious_patch_operator() const { return c_patch_; }  ///< C restricted to patches
  const SpMat& exterior_operator() const { return a_ext_; }
  const Vec& exterior_load() const { return l_ext_; }
  const SpMat& h1_gram() const { return h1_; }
  const SpMat& exterior_l2_gram() const { return l2_ext_; }
  const DofRestriction& free_dofs() const { return free_; }
  /// Non-Dirichlet nodes touched by an exterior element (includes interfaces).
  const std::vector<int>& exterior_free_nodes() const { return ext_free_; }
  /// Number of times the global matrix has been factorized.
  int factorizations() const { return factorizations_; }

  /// C^-1 rhs with homogeneous Dirichlet values; rhs and result on all nodes.
  Eigen::MatrixXd solve_global(const Eigen::MatrixXd& rhs) const;

  /// U_hat_alpha = C^-1 (C_patch U_alpha - sum_q B_q lambda_q,alpha + l_ext [alpha = 0]).
  PceField global_step(const PceField& u, const std::vector<PceApprox>& lambdas) const;

  /// Sum over alpha of a_alpha^T M_H1 b_alpha on the union index set.
  double h1_inner(const PceField& a, const PceField& b) const;
  /// Relative L2(Xi; L2(exterior)) distance to the reference.
  double error_indicator(const PceField& u, const PceField& reference) const;

private:
  ProblemSetup setup_;
  StructuredTriMesh global_;
  std::vector<int> regions_;
  InterfaceMap interfaces_;
  std::vector<std::unique_ptr<PatchProblem>> patches_;
  SpMat c_full_;
  SpMat c_patch_;
  SpMat a_ext_;
  Vec l_ext_;
  SpMat h1_;
  SpMat l2_ext_;
  DofRestriction free_;
  std::vector<int> ext_free_;
  Eigen::SimplicialLLT<SpMat> factor_;
  int factorizations_ = 0;
};

/// Combine two fields on the union of their index sets: alpha a + beta b.
PceField combine(double alpha, const PceField& a, double beta, const PceField& b);

struct RelaxationStrategy {
  enum class Kind { fixed, aitken };
  Kind kind = Kind::aitken;
  double rho = 1.0;
  double rho_inf = 1e-8;
  double rho_sup = 1.5;
  bool operator==(const RelaxationStrategy&) const = default;
};

/// Unclamped Aitken value -rho_prev <d - d_prev, d_prev> / |d - d_prev|^2
/// given the inner products; falls back to rho_prev for a vanishing denominator.
double aitken_raw(double rho_prev, double diff_dot_prev, double diff_norm_sq);

struct HistoryRow {
  int k = 0;
  double rho = 0.0;
  double error = 0.0;  ///< NaN without a reference
  std::vector<std::size_t> samples;
  std::vector<std::size_t> dim_w;
  std::vector<std::size_t> dim_lambda;
  std::vector<int> max_newton;
  double wall_time = 0.0;
  double increment = 0.0;  ///< |U^k - U^{k-1}|_H1 / |U^k|_H1
};

struct IterationState {
  int k = 0;
  PceField u;
  std::vector<PceApprox> w;
  std::vector<PceApprox> lambda;
  PceField delta_prev;
  double rho_prev = 1.0;
  std::vector<HistoryRow> history;
  bool locals_converged = true;
  double early_stop_increment = 0.0;
};

struct IterateOptions {
  RelaxationStrategy relaxation;
  AdaptiveParams adaptive;          ///< seed and tolerances for every local fit
  std::uint64_t patch_stream_offset = 1;  ///< patch q samples from stream offset + q
  NewtonOptions newton;
  int k_max = 20;
  bool early_stop = false;
  double early_stop_tol = 1e-12;
  /// Called after each iteration with the updated state.
  std::function<void(const IterationState&)> on_iteration;
};

/// Global-local iterations. Holds per-patch warm-start caches across iterations.
class GlobalLocalSolver {
public:
  GlobalLocalSolver(const GlobalLocalProblem& problem, IterateOptions options);

  IterationState initial_state() const;
  /// One iteration k -> k + 1. reference may be null.
  void step(IterationState& state, const PceField* reference);
  /// Runs until k_max (or the early stop). On error, state keeps the rows so far.
  void iterate(IterationState& state, const PceField* reference);

  const IterateOptions& options() const { return options_; }

private:
  const GlobalLocalProblem* problem_;
  IterateOptions options_;
  std::vector<LocalStochasticSolver> locals_;
};

/// Deterministic coupled solve for one xi: exterior global unknowns and fine
/// patch unknowns with the fine interface values tied to the coarse trace.
struct CoupledSample {
  Vec u;                    ///< global nodal vector
  std::vector<Vec> w;
  std::vector<Vec> lambda;
  int iterations = 0;
  double residual = 0.0;
};

class MonolithicSolver {
public:
  explicit MonolithicSolver(const GlobalLocalProblem& problem);
  CoupledSample solve(std::span<const double> xi, const NewtonOptions& opts,
                      const Vec* warm = nullptr) const;
  std::size_t size() const { return static_cast<std::size_t>(n_); }
  /// Unknown vector of a solved sample, usable as warm start.
  Vec pack(const CoupledSample& s) const;

private:
  const GlobalLocalProblem* problem_;
  Eigen::Index n_ = 0;
  std::vector<Eigen::Index> patch_offset_;
  std::vector<SpMat> embed_;  ///< x -> patch nodal values
  SpMat a_ext_;               ///< exterior operator on the exterior free nodes
  Vec l_ext_;
};

struct ReferenceSolution {
  PceField u;
  std::vector<PceApprox> w;
  std::vector<PceApprox> lambda;
  std::size_t samples = 0;
  bool converged = false;
  std::vector<int> newton_iterations;
};

ReferenceSolution solve_reference(const GlobalLocalProblem& problem, const AdaptiveParams& params,
                                  const NewtonOptions& newton);

/// Relative residual norms of the coupled equations at one point.
struct CoupledResiduals {
  double global = 0.0;               ///< exterior equilibrium with interface fluxes
  std::vector<double> local;         ///< patch equations with the multiplier
  std::vector<double> continuity;    ///< weak trace continuity
  double max() const;
};

CoupledResiduals coupled_residuals(const GlobalLocalProblem& problem, std::span<const double> xi,
                                   const Vec& u, const std::vector<Vec>& w,
                                   const std::vector<Vec>& lambda);

} // namespace patchdd
