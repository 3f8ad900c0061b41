/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/local_solver.hpp"

#include <exception>
#include <string>

#include <Eigen/SparseCholesky>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

std::vector<double> scaled(const std::vector<double>& v, double s) {
  std::vector<double> out(v);
  for (double& x : out) x *= s;
  return out;
}

} // namespace

PatchProblem::PatchProblem(int q, const StructuredTriMesh& global, StructuredTriMesh mesh,
                           const PatchInterface& iface, const Box& inclusion,
                           CoefficientModel model, double source)
    : q_(q),
      mesh_(std::move(mesh)),
      iface_(iface),
      model_(model),
      fraction_(patchdd::inclusion_fraction(mesh_, inclusion)),
      pattern_(make_element_pattern(mesh_)),
      base_(assemble_stiffness(mesh_, {})),
      inclusion_(assemble_stiffness_part(mesh_, fraction_)),
      reaction_(mesh_, scaled(fraction_, model.gamma * model.reaction_scale)),
      load_(assemble_load(mesh_, source)),
      coupling_(assemble_coupling(global, mesh_, iface_)),
      mass_llt_(coupling_.interface_mass),
      interior_(pattern_.matrix, iface_.interior_fine_nodes) {
  if (!(model_.gamma >= 0.0)) throw ConfigError("patch weight must be nonnegative");
  if (!(model_.reaction_scale >= 0.0)) throw ConfigError("reaction scale must be nonnegative");
  if (mass_llt_.info() != Eigen::Success) throw AssemblyError("interface mass matrix is singular");
}

double PatchProblem::diffusion_amplitude(std::span<const double> xi) const {
  const double a = model_.fixed_diffusion ? *model_.fixed_diffusion : xi[diffusion_variable()];
  return model_.gamma * a;
}

double PatchProblem::reaction_amplitude(std::span<const double> xi) const {
  // The reaction form already carries gamma and the reaction scale.
  return model_.fixed_reaction ? *model_.fixed_reaction : xi[reaction_variable()];
}

SpMat PatchProblem::stiffness(std::span<const double> xi) const {
  const double t = diffusion_amplitude(xi);
  if (!(1.0 + t > 0.0)) throw AssemblyError("patch diffusion coefficient must stay positive");
  SpMat a = base_;
  const double* inc = inclusion_.valuePtr();
  double* out = a.valuePtr();
  for (Eigen::Index k = 0; k < a.nonZeros(); ++k) out[k] += t * inc[k];
  return a;
}

Vec PatchProblem::residual(std::span<const double> xi, const Vec& w) const {
  return stiffness(xi) * w + reaction_.apply(w, reaction_amplitude(xi)) - load_;
}

Vec PatchProblem::multiplier(const Vec& full_residual) const {
  Vec r(static_cast<Eigen::Index>(iface_.fine_nodes.size()));
  for (std::size_t k = 0; k < iface_.fine_nodes.size(); ++k) r[k] = full_residual[iface_.fine_nodes[k]];
  return mass_llt_.solve(r);
}

LocalSample PatchProblem::solve(std::span<const double> xi, const Vec& dirichlet,
                                const NewtonOptions& opts, const Vec* warm_interior) const {
  if (!(opts.tol > 0.0)) throw ConfigError("Newton tolerance must be positive");
  if (static_cast<std::size_t>(dirichlet.size()) != iface_.fine_nodes.size()) {
    throw ConfigError("Dirichlet data must have one value per fine interface node");
  }
  const double rate = reaction_amplitude(xi);
  if (!(rate >= 0.0)) throw AssemblyError("reaction rate must be nonnegative");

  const SpMat a = stiffness(xi);
  Vec w = Vec::Zero(static_cast<Eigen::Index>(mesh_.num_nodes()));
  for (std::size_t k = 0; k < iface_.fine_nodes.size(); ++k) w[iface_.fine_nodes[k]] = dirichlet[k];

  auto interior_residual = [&](const Vec& v, Vec& full) {
    full = a * v + reaction_.apply(v, rate) - load_;
    return interior_.restrict_vector(full);
  };
  auto add_interior = [&](Vec& v, const Vec& dz, double step) {
    const auto& kept = interior_.kept();
    for (std::size_t i = 0; i < kept.size(); ++i) v[kept[i]] += step * dz[i];
  };

  Eigen::SimplicialLDLT<SpMat> ldlt;
  SpMat jac_reduced = interior_.restrict_matrix(a);
  ldlt.analyzePattern(jac_reduced);

  LocalSample out;
  Vec full;
  if (warm_interior && warm_interior->size() == static_cast<Eigen::Index>(interior_.size())) {
    add_interior(w, *warm_interior, 1.0);
  } else {
    // Reaction-free solve as initial guess.
    ldlt.factorize(jac_reduced);
    if (ldlt.info() != Eigen::Success) throw AssemblyError("patch stiffness is not positive definite");
    const Vec r0 = interior_.restrict_vector(a * w - load_);
    add_interior(w, -ldlt.solve(r0), 1.0);
    ++out.iterations;
  }

  Vec r = interior_residual(w, full);
  double norm = r.norm();
  SpMat jac = pattern_.zeros();
  while (norm > opts.tol) {
    if (out.iterations >= opts.max_iterations) {
      throw NewtonDivergedError("Newton did not converge on patch " + std::to_string(q_ + 1), norm);
    }
    jac = a;
    reaction_.add_jacobian(w, rate, pattern_, jac);
    interior_.gather_values(jac, jac_reduced);
    ldlt.factorize(jac_reduced);
    if (ldlt.info() != Eigen::Success) throw AssemblyError("Newton matrix is not positive definite");
    const Vec dz = -ldlt.solve(r);
    ++out.iterations;

    double step = 1.0;
    Vec trial = w;
    add_interior(trial, dz, step);
    Vec trial_full;
    Vec trial_r = interior_residual(trial, trial_full);
    for (int h = 0; h < opts.max_halvings && !(trial_r.norm() < norm); ++h) {
      step *= 0.5;
      trial = w;
      add_interior(trial, dz, step);
      trial_r = interior_residual(trial, trial_full);
    }
    if (!std::isfinite(trial_r.norm())) {
      throw NewtonDivergedError("Newton produced a non-finite residual on patch " +
                                    std::to_string(q_ + 1), norm);
    }
    w = std::move(trial);
    r = std::move(trial_r);
    full = std::move(trial_full);
    norm = r.norm();
  }
  out.residual = norm;
  out.lambda = multiplier(full);
  out.w = std::move(w);
  return out;
}

Vec interface_trace(const PatchInterface& iface, const Vec& global_values) {
  Vec coarse(static_cast<Eigen::Index>(iface.coarse_nodes.size()));
  for (std::size_t k = 0; k < iface.coarse_nodes.size(); ++k) coarse[k] = global_values[iface.coarse_nodes[k]];
  return iface.prolongation * coarse;
}

LocalFit LocalStochasticSolver::solve(const PceField& global, std::size_t m,
                                      const AdaptiveParams& params, const NewtonOptions& newton) {
  const PatchProblem& pb = *problem_;
  const PatchInterface& iface = pb.interface();
  const std::size_t nc = iface.coarse_nodes.size();
  const std::size_t nw = pb.mesh().num_nodes();
  const std::size_t nl = pb.num_interface();

  // Global coefficients restricted to the coarse interface nodes.
  Eigen::MatrixXd trace_coeffs(static_cast<Eigen::Index>(global.indices.size()),
                               static_cast<Eigen::Index>(nc));
  for (std::size_t k = 0; k < nc; ++k) trace_coeffs.col(k) = global.coeffs.col(iface.coarse_nodes[k]);

  LocalFit fit;
  std::vector<int>& iterations = fit.newton_iterations;

  BatchOracle oracle = [&](std::size_t first, const Eigen::MatrixXd& xi, Eigen::MatrixXd& y) {
    const Eigen::Index count = xi.rows();
    if (warm_.size() < first + count) warm_.resize(first + count);
    if (iterations.size() < first + count) iterations.resize(first + count, 0);
    const Eigen::MatrixXd psi = design_matrix(global.indices, xi);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index l = 0; l < count; ++l) {
      try {
        const Eigen::VectorXd point = xi.row(l).transpose();
        const Vec coarse = trace_coeffs.transpose() * psi.row(l).transpose();
        const Vec dirichlet = iface.prolongation * coarse;
        Vec& warm = warm_[first + l];
        LocalSample s = pb.solve(std::span<const double>(point.data(), m), dirichlet, newton,
                                 warm.size() ? &warm : nullptr);
        y.row(l).head(static_cast<Eigen::Index>(nw)) = s.w.transpose();
        y.row(l).tail(static_cast<Eigen::Index>(nl)) = s.lambda.transpose();
        warm = pb.interior().restrict_vector(s.w);
        iterations[first + l] = s.iterations;
      } catch (...) {
#pragma omp critical(patchdd_local_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  };

  const std::size_t groups[2] = {nw, nl};
  AdaptiveResult res = adaptive_fit(oracle, m, groups, params);
  fit.w = std::move(res.groups[0]);
  fit.lambda = std::move(res.groups[1]);
  fit.converged = res.converged;
  fit.samples = static_cast<std::size_t>(res.log.xi.rows());
  iterations.resize(fit.samples);
  return fit;
}

} // namespace patchdd
