/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "patchdd/multi_index.hpp"

namespace patchdd {

/// Counter-based generator: the value for (seed, stream, counter) is a fixed
/// hash, so sample l of a stream never depends on how many were drawn before.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on the open interval (0,1).
  double uniform(std::uint64_t counter) const;
  /// Row l of the result is sample (first + l) in dimension m.
  Eigen::MatrixXd uniform_block(std::uint64_t first, std::size_t count, std::size_t m) const;

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// Shifted Legendre polynomial orthonormal for the uniform measure on (0,1).
double legendre(int n, double t);
/// Values psi_0(t) .. psi_nmax(t).
void legendre_table(int nmax, double t, double* out);
/// Tensor product basis function psi_alpha(xi).
double eval_basis(const MultiIndex& alpha, std::span<const double> xi);
/// N x #A matrix psi_alpha(xi^l); samples holds one point per row.
Eigen::MatrixXd design_matrix(const MultiIndexSet& a, const Eigen::MatrixXd& samples);

struct LeastSquaresFit {
  Eigen::MatrixXd coeffs;        ///< #A x n_outputs, row k belongs to A[k]
  Eigen::VectorXd leverage;      ///< diagonal of the hat matrix
  double trace_inverse_gram = 0; ///< tr((Psi^T Psi)^-1)
  Eigen::MatrixXd residuals;     ///< Psi V - Y of the fitted samples
  Eigen::VectorXd complement;    ///< 1 - leverage, accurate near saturation
};

using MatrixCRef = Eigen::Ref<const Eigen::MatrixXd>;

/// Least squares through a column-pivoted QR of psi. Throws UnstableFitError
/// when psi is rank deficient or a leverage reaches 1 - 1e-12.
LeastSquaresFit ls_fit(MatrixCRef psi, MatrixCRef y);

/// Delta = (Psi V - Y) / (1 - h), one row per sample.
Eigen::MatrixXd loo_predicted_residuals(const LeastSquaresFit& fit, MatrixCRef psi, MatrixCRef y);
/// (1 - #A/N)^-1 (1 + tr(C^-1)/N) with C = Psi^T Psi / N; +inf when N <= #A.
double loo_correction(std::size_t cardinality, std::size_t samples, double trace_inverse_gram);
/// Per-output relative leave-one-out error, optionally multiplied by the
/// correction factor. Outputs with zero second moment get 0 when their
/// residuals vanish and +inf otherwise.
Eigen::VectorXd loo_errors(const LeastSquaresFit& fit, MatrixCRef psi, MatrixCRef y,
                           bool corrected = true);

/// Polynomial chaos approximation of a vector-valued function of xi.
struct PceApprox {
  MultiIndexSet indices;
  Eigen::MatrixXd coeffs;  ///< #A x n_outputs
  Eigen::VectorXd loo;     ///< corrected leave-one-out error per output
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  std::size_t outputs() const { return static_cast<std::size_t>(coeffs.cols()); }
  Eigen::VectorXd evaluate(std::span<const double> xi) const;
  /// Rows are sample points, columns outputs.
  Eigen::MatrixXd evaluate_many(const Eigen::MatrixXd& samples) const;
  double loo_norm() const;
};

/// Spatial field expanded on the chaos basis: row k of coeffs holds the nodal
/// vector of indices[k].
struct PceField {
  MultiIndexSet indices;
  Eigen::MatrixXd coeffs;  ///< #A x n_nodes
  std::string mesh_id;

  static PceField zero(std::size_t m, std::size_t nodes, std::string mesh_id = {});
  static PceField from_approx(const PceApprox& approx, std::string mesh_id = {});
  std::size_t nodes() const { return static_cast<std::size_t>(coeffs.cols()); }
  /// Coefficients re-expressed on a superset of indices (zero padding).
  Eigen::MatrixXd aligned(const MultiIndexSet& target) const;
  /// Drop indices whose coefficient vector is exactly zero, keeping alpha = 0.
  void prune_zero();
  Eigen::VectorXd evaluate(std::span<const double> xi) const;
};

struct SampleLog {
  Eigen::MatrixXd xi;  ///< N x m
  Eigen::MatrixXd y;   ///< N x n_outputs
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  /// (N, #A summed over output groups) after each adaptation round.
  std::vector<std::pair<std::size_t, std::size_t>> growth;
};

/// Scale on which the per-output LOO error is compared with eps_cv.
enum class LooScale {
  rms,  ///< sqrt(e_i T): relative root-mean-square prediction error
  mse,  ///< e_i T: relative mean-square prediction error
};

struct AdaptiveParams {
  std::size_t initial_samples = 1;
  double p_add = 0.1;
  double theta = 0.5;
  double eps_cv = 1e-3;
  double eps_stagn = 0.1;
  double eps_overfit = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t max_samples = 5000;
  std::size_t max_rounds = 200;
  LooScale scale = LooScale::rms;
  bool operator==(const AdaptiveParams&) const = default;
};

/// Fills y (rows = samples, columns = outputs) for the points xi. first is the
/// global index of the first row, so oracles can key per-sample state on it.
using BatchOracle =
    std::function<void(std::size_t first, const Eigen::MatrixXd& xi, Eigen::MatrixXd& y)>;

struct AdaptiveResult {
  std::vector<PceApprox> groups;  ///< one approximation per output group
  SampleLog log;
  bool converged = false;
  std::size_t rounds = 0;
};

/// Adaptive sparse least squares with random sampling and a working set
/// strategy. Columns of the oracle output are split into consecutive groups of
/// the given sizes; samples are shared while each group grows its own index set.
AdaptiveResult adaptive_fit(const BatchOracle& oracle, std::size_t m,
                            std::span<const std::size_t> group_sizes,
                            const AdaptiveParams& params);

} // namespace patchdd
