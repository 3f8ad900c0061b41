/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/sparse_poly.hpp"

#include <algorithm>
#include <cmath>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLeverageLimit = 1.0 - 1e-12;
constexpr double kRankThreshold = 1e-10;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double vector_norm(const Eigen::VectorXd& v) {
  if (!v.allFinite()) return kInf;
  return v.norm();
}

int max_degree(const MultiIndexSet& a) {
  int d = 0;
  for (const auto& x : a.indices()) {
    for (int v : x) d = std::max(d, v);
  }
  return d;
}

struct GroupState {
  std::size_t offset = 0;
  std::size_t width = 0;
  MultiIndexSet indices;
  LeastSquaresFit fit;
  Eigen::VectorXd eps;
  double norm = kInf;
  bool stable = false;
};

} // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  const std::uint64_t key = mix64(seed_ + 0x9e3779b97f4a7c15ULL * (stream_ + 1));
  return mix64(key ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform(std::uint64_t counter) const {
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

Eigen::MatrixXd CounterRng::uniform_block(std::uint64_t first, std::size_t count,
                                          std::size_t m) const {
  Eigen::MatrixXd xi(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(m));
  for (std::size_t l = 0; l < count; ++l) {
    for (std::size_t j = 0; j < m; ++j) xi(l, j) = uniform((first + l) * m + j);
  }
  return xi;
}

double legendre(int n, double t) {
  if (n < 0) throw ConfigError("polynomial degree must be nonnegative");
  const double x = 2.0 * t - 1.0;
  double p0 = 1.0;
  if (n == 0) return 1.0;
  double p1 = x;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return std::sqrt(2.0 * n + 1.0) * p1;
}

void legendre_table(int nmax, double t, double* out) {
  const double x = 2.0 * t - 1.0;
  double p0 = 1.0;
  double p1 = x;
  out[0] = 1.0;
  if (nmax >= 1) out[1] = std::sqrt(3.0) * x;
  for (int k = 1; k < nmax; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    out[k + 1] = std::sqrt(2.0 * k + 3.0) * p2;
  }
}

double eval_basis(const MultiIndex& alpha, std::span<const double> xi) {
  if (alpha.size() > xi.size()) throw ConfigError("sample dimension smaller than multi-index");
  double v = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] != 0) v *= legendre(alpha[j], xi[j]);
  }
  return v;
}

Eigen::MatrixXd design_matrix(const MultiIndexSet& a, const Eigen::MatrixXd& samples) {
  const std::size_t m = a.dim();
  if (static_cast<std::size_t>(samples.cols()) != m) {
    throw ConfigError("sample dimension does not match the multi-index set");
  }
  const int dmax = max_degree(a);
  const Eigen::Index n = samples.rows();
  Eigen::MatrixXd psi(n, static_cast<Eigen::Index>(a.size()));
  std::vector<double> table(m * (dmax + 1));
  for (Eigen::Index l = 0; l < n; ++l) {
    for (std::size_t j = 0; j < m; ++j) legendre_table(dmax, samples(l, j), &table[j * (dmax + 1)]);
    for (std::size_t k = 0; k < a.size(); ++k) {
      double v = 1.0;
      const MultiIndex& alpha = a[k];
      for (std::size_t j = 0; j < m; ++j) {
        if (alpha[j] != 0) v *= table[j * (dmax + 1) + alpha[j]];
      }
      psi(l, static_cast<Eigen::Index>(k)) = v;
    }
  }
  return psi;
}

LeastSquaresFit ls_fit(MatrixCRef psi, MatrixCRef y) {
  const Eigen::Index n = psi.rows();
  const Eigen::Index p = psi.cols();
  if (p == 0) throw UnstableFitError("empty basis");
  if (y.rows() != n) throw ConfigError("sample and evaluation counts differ");
  if (n < p) throw UnstableFitError("fewer samples than basis functions");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(n, p);
  qr.setThreshold(kRankThreshold);
  qr.compute(psi);
  if (qr.rank() < p) throw UnstableFitError("design matrix is rank deficient");

  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const auto r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();

  LeastSquaresFit fit;
  fit.leverage = q.rowwise().squaredNorm();
  if (fit.leverage.maxCoeff() >= kLeverageLimit) throw UnstableFitError("leverage saturated");

  // Residuals and 1 - h from the orthogonal complement of range(psi), which
  // avoids cancellation when the fit interpolates a sample.
  const auto householder = qr.householderQ();
  Eigen::MatrixXd c = householder.adjoint() * y;
  Eigen::MatrixXd tail = c;
  tail.topRows(p).setZero();
  fit.residuals = -(householder * tail);
  fit.complement = 1.0 - fit.leverage.array();
  for (Eigen::Index l = 0; l < n; ++l) {
    if (fit.leverage[l] <= 0.5) continue;
    const Eigen::VectorXd z = householder.adjoint() * Eigen::VectorXd::Unit(n, l);
    fit.complement[l] = z.tail(n - p).squaredNorm();
  }

  Eigen::MatrixXd x = c.topRows(p);
  r.solveInPlace(x);
  fit.coeffs = qr.colsPermutation() * x;
  Eigen::MatrixXd rinv = Eigen::MatrixXd::Identity(p, p);
  r.solveInPlace(rinv);
  fit.trace_inverse_gram = rinv.squaredNorm();
  return fit;
}

Eigen::MatrixXd loo_predicted_residuals(const LeastSquaresFit& fit, MatrixCRef psi, MatrixCRef y) {
  const bool stored = fit.residuals.rows() == y.rows() && fit.residuals.cols() == y.cols() &&
                      fit.complement.size() == y.rows();
  Eigen::MatrixXd delta = stored ? fit.residuals : Eigen::MatrixXd(psi * fit.coeffs - y);
  for (Eigen::Index l = 0; l < delta.rows(); ++l) {
    delta.row(l) /= stored ? fit.complement[l] : 1.0 - fit.leverage[l];
  }
  return delta;
}

double loo_correction(std::size_t cardinality, std::size_t samples, double trace_inverse_gram) {
  if (samples <= cardinality) return kInf;
  const double n = static_cast<double>(samples);
  // tr(C^-1) / N with C = Psi^T Psi / N equals tr((Psi^T Psi)^-1).
  return (1.0 + trace_inverse_gram) / (1.0 - static_cast<double>(cardinality) / n);
}

Eigen::VectorXd loo_errors(const LeastSquaresFit& fit, MatrixCRef psi, MatrixCRef y,
                           bool corrected) {
  const Eigen::MatrixXd delta = loo_predicted_residuals(fit, psi, y);
  const double n = static_cast<double>(psi.rows());
  const double t = corrected ? loo_correction(static_cast<std::size_t>(psi.cols()),
                                              static_cast<std::size_t>(psi.rows()),
                                              fit.trace_inverse_gram)
                             : 1.0;
  Eigen::VectorXd eps(y.cols());
  for (Eigen::Index i = 0; i < y.cols(); ++i) {
    const double e = delta.col(i).squaredNorm() / n;
    const double m2 = y.col(i).squaredNorm() / n;
    if (m2 == 0.0) {
      eps[i] = e == 0.0 ? 0.0 : kInf;
    } else {
      eps[i] = e / m2 * t;
    }
  }
  return eps;
}

Eigen::VectorXd PceApprox::evaluate(std::span<const double> xi) const {
  Eigen::VectorXd psi(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) psi[k] = eval_basis(indices[k], xi);
  return coeffs.transpose() * psi;
}

Eigen::MatrixXd PceApprox::evaluate_many(const Eigen::MatrixXd& samples) const {
  return design_matrix(indices, samples) * coeffs;
}

double PceApprox::loo_norm() const { return vector_norm(loo); }

PceField PceField::zero(std::size_t m, std::size_t nodes, std::string mesh_id) {
  PceField f;
  f.indices = MultiIndexSet::zero(m);
  f.coeffs = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(nodes));
  f.mesh_id = std::move(mesh_id);
  return f;
}

PceField PceField::from_approx(const PceApprox& approx, std::string mesh_id) {
  PceField f;
  f.indices = approx.indices;
  f.coeffs = approx.coeffs;
  f.mesh_id = std::move(mesh_id);
  return f;
}

Eigen::MatrixXd PceField::aligned(const MultiIndexSet& target) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target.size()), coeffs.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const long pos = target.find(indices[k]);
    if (pos < 0) throw ConfigError("target index set does not contain the field's indices");
    out.row(pos) = coeffs.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

void PceField::prune_zero() {
  MultiIndexSet kept(indices.dim());
  std::vector<Eigen::Index> rows;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const bool is_zero_index =
        std::all_of(indices[k].begin(), indices[k].end(), [](int v) { return v == 0; });
    if (is_zero_index || (coeffs.row(static_cast<Eigen::Index>(k)).array() != 0.0).any()) {
      kept.insert(indices[k]);
      rows.push_back(static_cast<Eigen::Index>(k));
    }
  }
  if (rows.size() == indices.size()) return;
  Eigen::MatrixXd c(static_cast<Eigen::Index>(rows.size()), coeffs.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) c.row(static_cast<Eigen::Index>(r)) = coeffs.row(rows[r]);
  indices = std::move(kept);
  coeffs = std::move(c);
}

Eigen::VectorXd PceField::evaluate(std::span<const double> xi) const {
  Eigen::VectorXd psi(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) psi[k] = eval_basis(indices[k], xi);
  return coeffs.transpose() * psi;
}

AdaptiveResult adaptive_fit(const BatchOracle& oracle, std::size_t m,
                            std::span<const std::size_t> group_sizes,
                            const AdaptiveParams& params) {
  if (group_sizes.empty()) throw ConfigError("adaptive fit needs at least one output group");
  if (!(params.p_add > 0.0)) throw ConfigError("p_add must be positive");
  if (!(params.theta >= 0.0 && params.theta <= 1.0)) throw ConfigError("theta must lie in [0,1]");
  if (!(params.eps_cv > 0.0) || !(params.eps_stagn > 0.0) || !(params.eps_overfit > 0.0)) {
    throw ConfigError("adaptive fit tolerances must be positive");
  }

  const CounterRng rng(params.seed, params.stream);
  AdaptiveResult result;
  SampleLog& log = result.log;
  log.seed = params.seed;
  log.stream = params.stream;
  std::size_t total_outputs = 0;
  std::vector<GroupState> groups(group_sizes.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    groups[g].offset = total_outputs;
    groups[g].width = group_sizes[g];
    groups[g].indices = MultiIndexSet::zero(m);
    total_outputs += group_sizes[g];
  }
  log.xi.resize(0, static_cast<Eigen::Index>(m));
  log.y.resize(0, static_cast<Eigen::Index>(total_outputs));

  auto sample_count = [&] { return static_cast<std::size_t>(log.xi.rows()); };

  auto draw = [&](std::size_t count) {
    const std::size_t first = sample_count();
    const Eigen::MatrixXd xi = rng.uniform_block(first, count, m);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(total_outputs));
    oracle(first, xi, y);
    log.xi.conservativeResize(static_cast<Eigen::Index>(first + count), Eigen::NoChange);
    log.xi.bottomRows(static_cast<Eigen::Index>(count)) = xi;
    log.y.conservativeResize(static_cast<Eigen::Index>(first + count), Eigen::NoChange);
    log.y.bottomRows(static_cast<Eigen::Index>(count)) = y;
  };

  auto group_y = [&](const GroupState& s) {
    return log.y.middleCols(static_cast<Eigen::Index>(s.offset), static_cast<Eigen::Index>(s.width));
  };

  // Fits s.indices; an unstable system yields an infinite error so that
  // the caller keeps sampling.
  auto refit = [&](GroupState& s) {
    const Eigen::MatrixXd psi = design_matrix(s.indices, log.xi);
    try {
      s.fit = ls_fit(psi, group_y(s));
      s.eps = loo_errors(s.fit, psi, group_y(s));
      if (params.scale == LooScale::rms) s.eps = s.eps.cwiseSqrt();
      s.norm = vector_norm(s.eps);
      s.stable = true;
    } catch (const UnstableFitError&) {
      s.fit = LeastSquaresFit{};
      s.eps = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(s.width), kInf);
      s.norm = kInf;
      s.stable = false;
    }
  };

  auto converged = [&](const GroupState& s) { return s.norm <= params.eps_cv; };
  auto all_converged = [&] {
    return std::all_of(groups.begin(), groups.end(), converged);
  };
  auto capped = [&] { return sample_count() >= params.max_samples; };

  draw(std::max<std::size_t>(1, std::min(params.initial_samples, params.max_samples)));
  for (auto& s : groups) refit(s);

  while (!all_converged() && !capped() && result.rounds < params.max_rounds) {
    ++result.rounds;

    // Adaptive random sampling.
    std::vector<Eigen::VectorXd> prev(groups.size());
    std::vector<bool> stagnated(groups.size(), false);
    auto sampling_done = [&] {
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!converged(groups[g]) && !stagnated[g]) return false;
      }
      return true;
    };
    while (!sampling_done() && !capped()) {
      const std::size_t n = sample_count();
      std::size_t add = static_cast<std::size_t>(std::ceil(params.p_add * static_cast<double>(n)));
      add = std::min(std::max<std::size_t>(add, 1), params.max_samples - n);
      draw(add);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        GroupState& s = groups[g];
        refit(s);
        stagnated[g] = false;
        if (prev[g].size() != 0 && std::isfinite(s.norm) && prev[g].allFinite() && s.norm > 0.0) {
          stagnated[g] = (s.eps - prev[g]).norm() / s.norm <= params.eps_stagn;
        }
        prev[g] = s.eps;
      }
    }

    // Working set strategy, separately per group.
    const std::size_t n = sample_count();
    for (GroupState& s : groups) {
      double prev_norm = s.norm;
      while (!converged(s)) {
        const MultiIndexSet margin_set = reduced_margin(s.indices);
        if (s.indices.size() + margin_set.size() > n) break;
        GroupState trial = s;
        trial.indices = set_union(s.indices, margin_set);
        refit(trial);
        if (!trial.stable) break;
        const std::size_t base = s.indices.size();
        std::vector<double> sq(margin_set.size());
        for (std::size_t k = 0; k < margin_set.size(); ++k) {
          sq[k] = trial.fit.coeffs.row(static_cast<Eigen::Index>(base + k)).squaredNorm();
        }
        MultiIndexSet picked(m);
        for (std::size_t k : select_bulk(margin_set, sq, params.theta)) picked.insert(margin_set[k]);
        s.indices = set_union(s.indices, picked);
        if (!s.indices.is_monotone()) throw Error("internal: adaptive index set lost monotonicity");
        refit(s);
        if (s.norm / prev_norm > 1.0 + params.eps_overfit) break;
        prev_norm = s.norm;
      }
    }

    std::size_t dims = 0;
    for (const auto& s : groups) dims += s.indices.size();
    log.growth.emplace_back(n, dims);
  }

  result.converged = all_converged();
  for (auto& s : groups) {
    PceApprox approx;
    approx.indices = s.indices;
    approx.samples = sample_count();
    approx.seed = params.seed;
    if (s.stable) {
      approx.coeffs = s.fit.coeffs;
      approx.loo = s.eps;
    } else {
      // Best effort for an unstable final system: the sample mean.
      approx.indices = MultiIndexSet::zero(m);
      approx.coeffs = group_y(s).colwise().mean();
      approx.loo = s.eps;
    }
    result.groups.push_back(std::move(approx));
  }
  return result;
}

} // namespace patchdd
