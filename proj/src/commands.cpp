/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "patchdd/error.hpp"
#include "patchdd/postproc.hpp"

namespace patchdd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::optional<PceField> load_reference_field(const RunConfig& c, const GlobalLocalProblem& problem) {
  if (c.reference_path.empty()) return std::nullopt;
  SolutionFile ref = read_solution(c.reference_path);
  if (static_cast<std::size_t>(ref.u.coeffs.cols()) != problem.global_mesh().num_nodes() ||
      ref.u.indices.dim() != problem.stochastic_dim()) {
    throw ConfigError("reference '" + c.reference_path + "' does not match the configured problem");
  }
  return std::move(ref.u);
}

RunOutput run_iterations(const RunConfig& c, const GlobalLocalProblem& problem,
                         const PceField* reference) {
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  out.config_hash = config_hash(c);
  out.has_reference = reference != nullptr;
  GlobalLocalSolver solver(problem, make_iterate_options(c));
  out.state = solver.initial_state();
  try {
    solver.iterate(out.state, reference);
    out.converged = out.state.locals_converged;
  } catch (const NewtonDivergedError& e) {
    out.failure = e.what();
    out.converged = false;
  }
  out.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_run_artifacts(const RunConfig& c, const GlobalLocalProblem& problem, const RunOutput& out) {
  const std::string& dir = c.output_dir;
  ensure_dir(dir);
  const IterationState& s = out.state;

  std::ostringstream hist;
  write_history_csv(hist, s.history, problem.num_patches(), out.config_hash);
  write_text_file(in_dir(dir, "history.csv"), hist.str());

  SolutionFile sol;
  sol.kind = "run";
  sol.config_hash = out.config_hash;
  sol.u = s.u;
  sol.w = s.w;
  sol.lambda = s.lambda;
  for (std::size_t q = 0; q < problem.num_patches(); ++q) sol.patch_mesh_ids.push_back(problem.patch(q).mesh().id);
  write_solution(in_dir(dir, "solution.json"), sol);

  const std::vector<DegreeRow> degrees = degree_table(s.u, s.w, s.lambda);
  std::ostringstream deg;
  write_degree_table_csv(deg, degrees, out.config_hash);
  write_text_file(in_dir(dir, "degrees.csv"), deg.str());

  json summary;
  summary["config_hash"] = out.config_hash;
  summary["config"] = config_to_json(c);
  summary["iterations"] = s.k;
  summary["converged"] = out.converged;
  summary["failure"] = out.failure;
  summary["global_factorizations"] = problem.factorizations();
  summary["total_seconds"] = out.total_seconds;
  json steps = json::array();
  for (const auto& r : s.history) {
    steps.push_back({{"k", r.k},
                     {"rho", r.rho},
                     {"error_indicator", finite_or_null(r.error)},
                     {"increment", r.increment},
                     {"wall_time_s", r.wall_time},
                     {"max_newton_iterations", r.max_newton}});
  }
  summary["steps"] = steps;
  summary["degree_table"] = degree_table_json(degrees);

  if (s.k > 0) {
    const MultiscaleStats stats = multiscale_statistics(problem, s.u, s.w);
    summary["deterministic"] = stats.deterministic;
    summary["max_variance"] = stats.max_variance;
    std::vector<NamedField> ext = {{"mean", stats.exterior_moments.mean},
                                   {"variance", stats.exterior_moments.variance}};
    std::vector<NamedField> pat = {{"mean", stats.patch_moments.mean},
                                   {"variance", stats.patch_moments.variance}};
    for (std::size_t i = 0; i < stats.exterior_sensitivity.size(); ++i) {
      const std::string name = "S_" + std::to_string(i + 1);
      ext.emplace_back(name, stats.exterior_sensitivity[i]);
      pat.emplace_back(name, stats.patch_sensitivity[i]);
    }
    std::ostringstream v1, v2;
    write_vtk(v1, stats.exterior, "multiscale solution, exterior", ext);
    write_vtk(v2, stats.patches, "multiscale solution, patches", pat);
    write_text_file(in_dir(dir, "multiscale_exterior.vtk"), v1.str());
    write_text_file(in_dir(dir, "multiscale_patches.vtk"), v2.str());
    for (const auto& [part, mesh, fields] :
         {std::tuple{"exterior", &stats.exterior, &ext}, std::tuple{"patches", &stats.patches, &pat}}) {
      for (const auto& [name, values] : *fields) {
        std::ostringstream csv;
        write_nodal_csv(csv, *mesh, values);
        write_text_file(in_dir(dir, std::string(part) + "_" + name + ".csv"), csv.str());
      }
    }
  }
  write_text_file(in_dir(dir, "summary.json"), summary.dump(2) + "\n");
}

RunOutput command_run(const RunConfig& c) {
  const GlobalLocalProblem problem(make_setup(c));
  const std::optional<PceField> ref = load_reference_field(c, problem);
  RunOutput out = run_iterations(c, problem, ref ? &*ref : nullptr);
  write_run_artifacts(c, problem, out);
  return out;
}

ReferenceOutput command_reference(const RunConfig& c) {
  const GlobalLocalProblem problem(make_setup(c));
  ReferenceOutput out;
  out.config_hash = config_hash(c);
  out.solution = solve_reference(problem, make_reference_params(c), c.newton);
  out.degrees = degree_table(out.solution.u, out.solution.w, out.solution.lambda);

  ensure_dir(c.output_dir);
  SolutionFile sol;
  sol.kind = "reference";
  sol.config_hash = out.config_hash;
  sol.u = out.solution.u;
  sol.w = out.solution.w;
  sol.lambda = out.solution.lambda;
  sol.samples = out.solution.samples;
  for (std::size_t q = 0; q < problem.num_patches(); ++q) sol.patch_mesh_ids.push_back(problem.patch(q).mesh().id);
  write_solution(in_dir(c.output_dir, "reference.json"), sol);

  std::ostringstream deg;
  write_degree_table_csv(deg, out.degrees, out.config_hash);
  write_text_file(in_dir(c.output_dir, "reference_degrees.csv"), deg.str());

  json summary = {{"config_hash", out.config_hash},
                  {"N_ref", out.solution.samples},
                  {"dim_ref_U", out.solution.u.indices.size()},
                  {"converged", out.solution.converged},
                  {"eps_cv", c.reference_eps_cv},
                  {"degree_table", degree_table_json(out.degrees)}};
  write_text_file(in_dir(c.output_dir, "reference_summary.json"), summary.dump(2) + "\n");
  return out;
}

SweepSpec parse_sweep(const json& j) {
  if (!j.is_object()) throw ConfigError("sweep specification must be an object");
  SweepSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key != "rho" && key != "eps_cv") throw ConfigError("unknown sweep field '" + key + "'");
    if (!value.is_array()) throw ConfigError("sweep field '" + key + "' must be a list");
  }
  if (j.contains("rho")) {
    for (const auto& v : j["rho"]) {
      if (v.is_string() && v.get<std::string>() == "aitken") {
        spec.rho.emplace_back(std::nullopt);
      } else if (v.is_number() && v.get<double>() > 0.0) {
        spec.rho.emplace_back(v.get<double>());
      } else {
        throw ConfigError("sweep field 'rho' entries must be positive numbers or \"aitken\"");
      }
    }
  }
  if (j.contains("eps_cv")) {
    for (const auto& v : j["eps_cv"]) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigError("sweep field 'eps_cv' entries must be positive numbers");
      }
      spec.eps_cv.push_back(v.get<double>());
    }
  }
  if (spec.rho.empty() && spec.eps_cv.empty()) throw ConfigError("sweep specification is empty");
  return spec;
}

std::vector<SweepRun> command_sweep(const RunConfig& c, const SweepSpec& spec, int jobs) {
  if (spec.rho.empty() && spec.eps_cv.empty()) throw ConfigError("sweep specification is empty");
  const GlobalLocalProblem problem(make_setup(c));
  const std::optional<PceField> ref = load_reference_field(c, problem);

  std::vector<std::optional<double>> rhos = spec.rho;
  if (rhos.empty()) {
    rhos.push_back(c.relaxation.kind == RelaxationStrategy::Kind::aitken ? std::nullopt
                                                                         : std::optional(c.relaxation.rho));
  }
  std::vector<double> eps = spec.eps_cv.empty() ? std::vector<double>{c.adaptive.eps_cv} : spec.eps_cv;

  std::vector<SweepRun> runs;
  for (const auto& rho : rhos) {
    for (double e : eps) {
      SweepRun r;
      r.id = "rho-" + (rho ? short_number(*rho) : std::string("aitken")) + "_eps-" + short_number(e);
      r.config = c;
      r.config.adaptive.eps_cv = e;
      if (rho) {
        r.config.relaxation.kind = RelaxationStrategy::Kind::fixed;
        r.config.relaxation.rho = *rho;
      } else {
        r.config.relaxation.kind = RelaxationStrategy::Kind::aitken;
      }
      r.config.output_dir = in_dir(c.output_dir, r.id);
      validate_config(r.config);
      runs.push_back(std::move(r));
    }
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        runs[i].output = run_iterations(runs[i].config, problem, ref ? &*ref : nullptr);
        write_run_artifacts(runs[i].config, problem, runs[i].output);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Long-format table of whatever finished, written before rethrowing.
  ensure_dir(c.output_dir);
  std::ostringstream csv;
  csv.precision(17);
  csv << "# config_hash=" << config_hash(c) << "\nrun_id,k,error\n";
  for (const auto& r : runs) {
    for (const auto& row : r.output.state.history) {
      csv << r.id << ',' << row.k << ',';
      if (std::isnan(row.error)) {
        csv << "nan";
      } else {
        csv << row.error;
      }
      csv << '\n';
    }
  }
  write_text_file(in_dir(c.output_dir, "sweep.csv"), csv.str());
  if (failure) std::rethrow_exception(failure);
  return runs;
}

double command_compare(const RunConfig& c, const std::string& a, const std::string& b) {
  const GlobalLocalProblem problem(make_setup(c));
  const SolutionFile sa = read_solution(a);
  const SolutionFile sb = read_solution(b);
  const std::size_t n = problem.global_mesh().num_nodes();
  if (static_cast<std::size_t>(sa.u.coeffs.cols()) != n || static_cast<std::size_t>(sb.u.coeffs.cols()) != n ||
      sa.u.indices.dim() != sb.u.indices.dim()) {
    throw ConfigError("solution files do not match the configured problem");
  }
  return problem.error_indicator(sa.u, sb.u);
}

} // namespace patchdd
