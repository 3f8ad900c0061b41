/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/global_local.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

std::vector<char> region_mask(const std::vector<int>& regions, bool exterior) {
  std::vector<char> mask(regions.size());
  for (std::size_t t = 0; t < regions.size(); ++t) {
    mask[t] = static_cast<char>((regions[t] == kExterior) == exterior);
  }
  return mask;
}

MultiIndexSet union_with_lambdas(const MultiIndexSet& base, const std::vector<PceApprox>& lambdas) {
  MultiIndexSet u = base;
  for (const auto& l : lambdas) {
    for (const auto& a : l.indices.indices()) u.insert(a);
  }
  return u;
}

Eigen::MatrixXd aligned_approx(const PceApprox& a, const MultiIndexSet& target) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target.size()), a.coeffs.cols());
  for (std::size_t k = 0; k < a.indices.size(); ++k) {
    out.row(target.find(a.indices[k])) = a.coeffs.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

double gram_sum(const Eigen::MatrixXd& a, const SpMat& m, const Eigen::MatrixXd& b) {
  // Sum over rows r of a_r^T M b_r.
  const Eigen::MatrixXd mb = (m * b.transpose()).transpose();
  return a.cwiseProduct(mb).sum();
}

PceApprox zero_approx(std::size_t m, std::size_t outputs) {
  PceApprox a;
  a.indices = MultiIndexSet::zero(m);
  a.coeffs = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(outputs));
  a.loo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outputs));
  return a;
}

} // namespace

GlobalLocalProblem::GlobalLocalProblem(const ProblemSetup& setup) : setup_(setup) {
  const PatchLayout& layout = setup_.layout;
  layout.validate(setup_.domain);
  if (setup_.models.size() != layout.size()) {
    throw ConfigError("one coefficient model per patch is required");
  }
  if (!std::isfinite(setup_.source)) throw ConfigError("source term must be finite");

  global_ = build_rect_mesh(setup_.domain, setup_.coarse_size, BoundaryKind::dirichlet, "global");
  regions_ = partition_global(global_, layout);

  std::vector<StructuredTriMesh> fine;
  for (std::size_t q = 0; q < layout.size(); ++q) {
    fine.push_back(build_rect_mesh(layout.patch_boxes[q], setup_.fine_size, BoundaryKind::interface,
                                   "patch-" + std::to_string(q + 1)));
  }
  interfaces_ = build_interface_map(global_, fine, layout);
  for (std::size_t q = 0; q < layout.size(); ++q) {
    patches_.push_back(std::make_unique<PatchProblem>(
        static_cast<int>(q), global_, std::move(fine[q]), interfaces_.patches[q],
        layout.inclusion_boxes[q], setup_.models[q], setup_.source));
  }

  // Fictitious diffusion: deterministic stand-in for each patch.
  std::vector<double> coeff(global_.num_triangles(), 1.0);
  for (std::size_t q = 0; q < layout.size(); ++q) {
    const CoefficientModel& model = setup_.models[q];
    double amplitude = 0.0;
    switch (setup_.fictitious) {
      case FictitiousRule::mean: amplitude = 0.5 * model.gamma; break;
      case FictitiousRule::unit: amplitude = 0.0; break;
      case FictitiousRule::fixed:
        if (!model.fixed_diffusion) {
          throw ConfigError("fictitious rule 'fixed' requires fixed diffusion inputs");
        }
        amplitude = model.gamma * *model.fixed_diffusion;
        break;
    }
    const std::vector<double> frac = inclusion_fraction(global_, layout.inclusion_boxes[q]);
    for (std::size_t t = 0; t < coeff.size(); ++t) {
      if (regions_[t] == static_cast<int>(q)) coeff[t] = 1.0 + amplitude * frac[t];
    }
  }
  const std::vector<char> ext_mask = region_mask(regions_, true);
  const std::vector<char> patch_mask = region_mask(regions_, false);
  c_full_ = assemble_stiffness(global_, coeff);
  c_patch_ = assemble_stiffness(global_, coeff, patch_mask);
  a_ext_ = assemble_stiffness(global_, {}, ext_mask);
  l_ext_ = assemble_load(global_, setup_.source, ext_mask);
  h1_ = gram_matrices(global_).h1;
  l2_ext_ = assemble_mass(global_, {}, ext_mask);

  std::vector<int> free_nodes;
  for (std::size_t n = 0; n < global_.num_nodes(); ++n) {
    if (global_.node_tags[n] != NodeTag::dirichlet) free_nodes.push_back(static_cast<int>(n));
  }
  free_ = DofRestriction(c_full_, free_nodes);

  std::vector<char> touched(global_.num_nodes(), 0);
  for (std::size_t t = 0; t < global_.num_triangles(); ++t) {
    if (!ext_mask[t]) continue;
    for (int v : global_.triangles[t]) touched[v] = 1;
  }
  for (std::size_t n = 0; n < global_.num_nodes(); ++n) {
    if (touched[n] && global_.node_tags[n] != NodeTag::dirichlet) ext_free_.push_back(static_cast<int>(n));
  }

  factor_.compute(free_.restrict_matrix(c_full_));
  ++factorizations_;
  if (factor_.info() != Eigen::Success) {
    throw ConfigError("global fictitious operator is not symmetric positive definite");
  }
}

Eigen::MatrixXd GlobalLocalProblem::solve_global(const Eigen::MatrixXd& rhs) const {
  const auto& kept = free_.kept();
  Eigen::MatrixXd reduced(static_cast<Eigen::Index>(kept.size()), rhs.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) reduced.row(i) = rhs.row(kept[i]);
  const Eigen::MatrixXd sol = factor_.solve(reduced);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < kept.size(); ++i) out.row(kept[i]) = sol.row(i);
  return out;
}

PceField GlobalLocalProblem::global_step(const PceField& u,
                                         const std::vector<PceApprox>& lambdas) const {
  if (lambdas.size() != patches_.size()) throw ConfigError("one multiplier per patch is required");
  MultiIndexSet indices = union_with_lambdas(u.indices, lambdas);
  indices.insert(MultiIndex(stochastic_dim(), 0));
  const Eigen::MatrixXd ua = u.aligned(indices);

  Eigen::MatrixXd rhs = c_patch_ * ua.transpose();  // nodes x #A
  for (std::size_t q = 0; q < patches_.size(); ++q) {
    rhs -= patches_[q]->coupling().coarse * aligned_approx(lambdas[q], indices).transpose();
  }
  rhs.col(indices.find(MultiIndex(stochastic_dim(), 0))) += l_ext_;

  PceField out;
  out.indices = std::move(indices);
  out.coeffs = solve_global(rhs).transpose();
  out.mesh_id = global_.id;
  return out;
}

double GlobalLocalProblem::h1_inner(const PceField& a, const PceField& b) const {
  const MultiIndexSet u = set_union(a.indices, b.indices);
  return gram_sum(a.aligned(u), h1_, b.aligned(u));
}

double GlobalLocalProblem::error_indicator(const PceField& u, const PceField& reference) const {
  const double den = gram_sum(reference.coeffs, l2_ext_, reference.coeffs);
  if (!(den > 0.0)) throw ConfigError("reference solution vanishes on the exterior domain");
  const MultiIndexSet all = set_union(u.indices, reference.indices);
  const Eigen::MatrixXd d = u.aligned(all) - reference.aligned(all);
  return std::sqrt(std::max(0.0, gram_sum(d, l2_ext_, d)) / den);
}

PceField combine(double alpha, const PceField& a, double beta, const PceField& b) {
  PceField out;
  out.indices = set_union(a.indices, b.indices);
  out.coeffs = alpha * a.aligned(out.indices) + beta * b.aligned(out.indices);
  out.mesh_id = a.mesh_id;
  return out;
}

double aitken_raw(double rho_prev, double diff_dot_prev, double diff_norm_sq) {
  if (!(diff_norm_sq > 0.0) || !std::isfinite(diff_norm_sq)) return rho_prev;
  return -rho_prev * diff_dot_prev / diff_norm_sq;
}

GlobalLocalSolver::GlobalLocalSolver(const GlobalLocalProblem& problem, IterateOptions options)
    : problem_(&problem), options_(std::move(options)) {
  const RelaxationStrategy& r = options_.relaxation;
  if (r.kind == RelaxationStrategy::Kind::fixed && !(r.rho > 0.0)) {
    throw ConfigError("relaxation.rho must be positive");
  }
  if (r.kind == RelaxationStrategy::Kind::aitken && !(r.rho_inf > 0.0 && r.rho_inf <= r.rho_sup)) {
    throw ConfigError("relaxation bounds must satisfy 0 < rho_inf <= rho_sup");
  }
  if (options_.k_max < 0) throw ConfigError("iterations.k_max must be nonnegative");
  for (std::size_t q = 0; q < problem.num_patches(); ++q) locals_.emplace_back(problem.patch(q));
}

IterationState GlobalLocalSolver::initial_state() const {
  const GlobalLocalProblem& pb = *problem_;
  const std::size_t m = pb.stochastic_dim();
  IterationState s;
  s.u = PceField::zero(m, pb.global_mesh().num_nodes(), pb.global_mesh().id);
  s.delta_prev = s.u;
  for (std::size_t q = 0; q < pb.num_patches(); ++q) {
    s.w.push_back(zero_approx(m, pb.patch(q).mesh().num_nodes()));
    s.lambda.push_back(zero_approx(m, pb.patch(q).num_interface()));
  }
  return s;
}

void GlobalLocalSolver::step(IterationState& state, const PceField* reference) {
  const GlobalLocalProblem& pb = *problem_;
  const auto start = std::chrono::steady_clock::now();
  const int k = state.k + 1;

  const PceField u_hat = pb.global_step(state.u, state.lambda);
  const PceField delta = combine(1.0, u_hat, -1.0, state.u);

  const RelaxationStrategy& relax = options_.relaxation;
  double rho = relax.rho;
  if (relax.kind == RelaxationStrategy::Kind::aitken) {
    if (k <= 2) {
      rho = 1.0;
    } else {
      const PceField diff = combine(1.0, delta, -1.0, state.delta_prev);
      const double raw = aitken_raw(state.rho_prev, pb.h1_inner(diff, state.delta_prev),
                                    pb.h1_inner(diff, diff));
      rho = std::clamp(raw, relax.rho_inf, relax.rho_sup);
    }
  }

  PceField u_new = combine(rho, u_hat, 1.0 - rho, state.u);
  u_new.prune_zero();
  const PceField change = combine(1.0, u_new, -1.0, state.u);
  const double unorm = pb.h1_inner(u_new, u_new);
  const double increment = unorm > 0.0 ? std::sqrt(pb.h1_inner(change, change) / unorm) : 0.0;

  HistoryRow row;
  row.k = k;
  row.rho = rho;
  row.increment = increment;
  bool all_converged = true;
  for (std::size_t q = 0; q < pb.num_patches(); ++q) {
    AdaptiveParams params = options_.adaptive;
    params.stream = options_.patch_stream_offset + q;
    LocalFit fit = locals_[q].solve(u_new, pb.stochastic_dim(), params, options_.newton);
    all_converged = all_converged && fit.converged;
    row.samples.push_back(fit.samples);
    row.dim_w.push_back(fit.w.indices.size());
    row.dim_lambda.push_back(fit.lambda.indices.size());
    row.max_newton.push_back(fit.newton_iterations.empty()
                                 ? 0
                                 : *std::max_element(fit.newton_iterations.begin(),
                                                     fit.newton_iterations.end()));
    state.w[q] = std::move(fit.w);
    state.lambda[q] = std::move(fit.lambda);
  }

  state.k = k;
  state.u = std::move(u_new);
  state.delta_prev = delta;
  state.rho_prev = rho;
  state.locals_converged = all_converged;
  state.early_stop_increment = increment;
  row.error = reference ? pb.error_indicator(state.u, *reference)
                        : std::numeric_limits<double>::quiet_NaN();
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  state.history.push_back(std::move(row));
  if (options_.on_iteration) options_.on_iteration(state);
}

void GlobalLocalSolver::iterate(IterationState& state, const PceField* reference) {
  while (state.k < options_.k_max) {
    step(state, reference);
    if (options_.early_stop && state.early_stop_increment <= options_.early_stop_tol) break;
  }
}

MonolithicSolver::MonolithicSolver(const GlobalLocalProblem& problem) : problem_(&problem) {
  const auto& ext = problem.exterior_free_nodes();
  const std::size_t nglobal = problem.global_mesh().num_nodes();
  std::vector<int> position(nglobal, -1);
  for (std::size_t i = 0; i < ext.size(); ++i) position[ext[i]] = static_cast<int>(i);
  n_ = static_cast<Eigen::Index>(ext.size());
  for (std::size_t q = 0; q < problem.num_patches(); ++q) {
    patch_offset_.push_back(n_);
    n_ += static_cast<Eigen::Index>(problem.patch(q).interior().size());
  }

  for (std::size_t q = 0; q < problem.num_patches(); ++q) {
    const PatchProblem& p = problem.patch(q);
    const PatchInterface& iface = p.interface();
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < iface.prolongation.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(iface.prolongation, k); it; ++it) {
        const int col = position[iface.coarse_nodes[it.col()]];
        if (col < 0) throw MeshError("coarse interface node is not an exterior unknown");
        trip.emplace_back(iface.fine_nodes[it.row()], col, it.value());
      }
    }
    const auto& kept = p.interior().kept();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      trip.emplace_back(kept[i], patch_offset_[q] + static_cast<Eigen::Index>(i), 1.0);
    }
    SpMat e(static_cast<Eigen::Index>(p.mesh().num_nodes()), n_);
    e.setFromTriplets(trip.begin(), trip.end());
    embed_.push_back(std::move(e));
  }

  const DofRestriction ext_dofs(problem.exterior_operator(), ext);
  const SpMat a_small = ext_dofs.restrict_matrix(problem.exterior_operator());
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < a_small.outerSize(); ++k) {
    for (SpMat::InnerIterator it(a_small, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  }
  a_ext_.resize(n_, n_);
  a_ext_.setFromTriplets(trip.begin(), trip.end());
  l_ext_ = Vec::Zero(n_);
  l_ext_.head(static_cast<Eigen::Index>(ext.size())) = ext_dofs.restrict_vector(problem.exterior_load());
}

CoupledSample MonolithicSolver::solve(std::span<const double> xi, const NewtonOptions& opts,
                                      const Vec* warm) const {
  const GlobalLocalProblem& pb = *problem_;
  const std::size_t nq = pb.num_patches();
  std::vector<SpMat> stiff(nq);
  std::vector<double> rate(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    stiff[q] = pb.patch(q).stiffness(xi);
    rate[q] = pb.patch(q).reaction_amplitude(xi);
  }

  auto residual = [&](const Vec& x) {
    Vec f = a_ext_ * x - l_ext_;
    for (std::size_t q = 0; q < nq; ++q) {
      const Vec w = embed_[q] * x;
      const Vec r = stiff[q] * w + pb.patch(q).reaction().apply(w, rate[q]) - pb.patch(q).load();
      f += embed_[q].transpose() * r;
    }
    return f;
  };

  Vec x = (warm && warm->size() == n_) ? *warm : Vec::Zero(n_);
  Vec f = residual(x);
  double norm = f.norm();
  CoupledSample out;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analyzed = false;
  while (norm > opts.tol) {
    if (out.iterations >= opts.max_iterations) {
      throw NewtonDivergedError("coupled Newton solve did not converge", norm);
    }
    SpMat jac = a_ext_;
    for (std::size_t q = 0; q < nq; ++q) {
      const PatchProblem& p = pb.patch(q);
      SpMat k = stiff[q];
      p.reaction().add_jacobian(embed_[q] * x, rate[q], p.pattern(), k);
      jac += SpMat(embed_[q].transpose() * k * embed_[q]);
    }
    if (!analyzed) {
      ldlt.analyzePattern(jac);
      analyzed = true;
    }
    ldlt.factorize(jac);
    if (ldlt.info() != Eigen::Success) throw AssemblyError("coupled Newton matrix is not positive definite");
    const Vec dx = -ldlt.solve(f);
    ++out.iterations;

    double step = 1.0;
    Vec trial = x + dx;
    Vec ft = residual(trial);
    for (int h = 0; h < opts.max_halvings && !(ft.norm() < norm); ++h) {
      step *= 0.5;
      trial = x + step * dx;
      ft = residual(trial);
    }
    if (!std::isfinite(ft.norm())) throw NewtonDivergedError("coupled Newton produced a non-finite residual", norm);
    x = std::move(trial);
    f = std::move(ft);
    norm = f.norm();
  }
  out.residual = norm;

  const auto& ext = pb.exterior_free_nodes();
  out.u = Vec::Zero(static_cast<Eigen::Index>(pb.global_mesh().num_nodes()));
  for (std::size_t i = 0; i < ext.size(); ++i) out.u[ext[i]] = x[static_cast<Eigen::Index>(i)];
  for (std::size_t q = 0; q < nq; ++q) {
    const PatchProblem& p = pb.patch(q);
    Vec w = embed_[q] * x;
    const Vec r = stiff[q] * w + p.reaction().apply(w, rate[q]) - p.load();
    out.lambda.push_back(p.multiplier(r));
    const PatchInterface& iface = p.interface();
    // Coarse nodes inside the patch take the coincident fine values.
    for (std::size_t i = 0; i < iface.interior_coarse_nodes.size(); ++i) {
      out.u[iface.interior_coarse_nodes[i]] = w[iface.coarse_to_fine_interior[i]];
    }
    out.w.push_back(std::move(w));
  }
  return out;
}

Vec MonolithicSolver::pack(const CoupledSample& s) const {
  const auto& ext = problem_->exterior_free_nodes();
  Vec x(n_);
  for (std::size_t i = 0; i < ext.size(); ++i) x[static_cast<Eigen::Index>(i)] = s.u[ext[i]];
  for (std::size_t q = 0; q < problem_->num_patches(); ++q) {
    const auto& kept = problem_->patch(q).interior().kept();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      x[patch_offset_[q] + static_cast<Eigen::Index>(i)] = s.w[q][kept[i]];
    }
  }
  return x;
}

ReferenceSolution solve_reference(const GlobalLocalProblem& problem, const AdaptiveParams& params,
                                  const NewtonOptions& newton) {
  const MonolithicSolver mono(problem);
  const std::size_t m = problem.stochastic_dim();
  const std::size_t nq = problem.num_patches();
  std::vector<std::size_t> groups = {problem.global_mesh().num_nodes()};
  for (std::size_t q = 0; q < nq; ++q) {
    groups.push_back(problem.patch(q).mesh().num_nodes());
    groups.push_back(problem.patch(q).num_interface());
  }

  std::vector<int> iterations;
  BatchOracle oracle = [&](std::size_t first, const Eigen::MatrixXd& xi, Eigen::MatrixXd& y) {
    const Eigen::Index count = xi.rows();
    if (iterations.size() < first + count) iterations.resize(first + count, 0);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index l = 0; l < count; ++l) {
      try {
        const Eigen::VectorXd point = xi.row(l).transpose();
        const CoupledSample s = mono.solve(std::span<const double>(point.data(), m), newton);
        Eigen::Index col = 0;
        y.row(l).segment(col, s.u.size()) = s.u.transpose();
        col += s.u.size();
        for (std::size_t q = 0; q < nq; ++q) {
          y.row(l).segment(col, s.w[q].size()) = s.w[q].transpose();
          col += s.w[q].size();
          y.row(l).segment(col, s.lambda[q].size()) = s.lambda[q].transpose();
          col += s.lambda[q].size();
        }
        iterations[first + l] = s.iterations;
      } catch (...) {
#pragma omp critical(patchdd_reference_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  };

  AdaptiveResult res = adaptive_fit(oracle, m, groups, params);
  ReferenceSolution ref;
  ref.u = PceField::from_approx(res.groups[0], problem.global_mesh().id);
  for (std::size_t q = 0; q < nq; ++q) {
    ref.w.push_back(std::move(res.groups[1 + 2 * q]));
    ref.lambda.push_back(std::move(res.groups[2 + 2 * q]));
  }
  ref.samples = static_cast<std::size_t>(res.log.xi.rows());
  ref.converged = res.converged;
  ref.newton_iterations = std::move(iterations);
  return ref;
}

double CoupledResiduals::max() const {
  double r = global;
  for (double v : local) r = std::max(r, v);
  for (double v : continuity) r = std::max(r, v);
  return r;
}

CoupledResiduals coupled_residuals(const GlobalLocalProblem& problem, std::span<const double> xi,
                                   const Vec& u, const std::vector<Vec>& w,
                                   const std::vector<Vec>& lambda) {
  const std::size_t nq = problem.num_patches();
  if (w.size() != nq || lambda.size() != nq) throw ConfigError("one local field per patch is required");
  CoupledResiduals out;

  Vec rg = problem.exterior_operator() * u - problem.exterior_load();
  for (std::size_t q = 0; q < nq; ++q) rg += problem.patch(q).coupling().coarse * lambda[q];
  double num = 0.0, den = 0.0;
  for (int n : problem.exterior_free_nodes()) {
    num += rg[n] * rg[n];
    den += problem.exterior_load()[n] * problem.exterior_load()[n];
  }
  out.global = std::sqrt(num / (den > 0.0 ? den : 1.0));

  for (std::size_t q = 0; q < nq; ++q) {
    const PatchProblem& p = problem.patch(q);
    const Vec r = p.residual(xi, w[q]) - p.coupling().fine * lambda[q];
    const double ln = p.load().norm();
    out.local.push_back(r.norm() / (ln > 0.0 ? ln : 1.0));

    const Vec trace = interface_trace(p.interface(), u);
    Vec wg(static_cast<Eigen::Index>(p.num_interface()));
    for (std::size_t k = 0; k < p.num_interface(); ++k) wg[k] = w[q][p.interface().fine_nodes[k]];
    const Vec rc = p.coupling().interface_mass * (trace - wg);
    const double tn = (p.coupling().interface_mass * trace).norm();
    out.continuity.push_back(rc.norm() / (tn > 0.0 ? tn : 1.0));
  }
  return out;
}

} // namespace patchdd
