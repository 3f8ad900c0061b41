/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchdd/config.hpp"
#include "patchdd/global_local.hpp"
#include "patchdd/serialization.hpp"

namespace patchdd {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNotConverged = 2 };

struct RunOutput {
  std::string config_hash;
  IterationState state;
  bool converged = false;   ///< every local fit converged in the last iteration
  bool has_reference = false;
  std::string failure;      ///< message of an aborting numerical error, empty otherwise
  double total_seconds = 0.0;
};

/// Reference field named by c.reference_path, checked against the problem mesh.
std::optional<PceField> load_reference_field(const RunConfig& c, const GlobalLocalProblem& problem);

/// Runs the global-local iterations. Numerical failures (Newton divergence) are
/// caught and reported through RunOutput::failure with the partial history kept.
RunOutput run_iterations(const RunConfig& c, const GlobalLocalProblem& problem,
                         const PceField* reference);

/// history.csv, solution.json, summary.json, degrees.csv, VTK and CSV fields.
void write_run_artifacts(const RunConfig& c, const GlobalLocalProblem& problem, const RunOutput& out);

/// Full run command: problem, optional reference, iterations, artifacts.
RunOutput command_run(const RunConfig& c);

struct ReferenceOutput {
  std::string config_hash;
  ReferenceSolution solution;
  std::vector<DegreeRow> degrees;
};

/// Builds the reference and writes reference.json, reference_degrees.csv and
/// reference_summary.json to the output directory.
ReferenceOutput command_reference(const RunConfig& c);

/// One entry per relaxation choice: nullopt means Aitken.
struct SweepSpec {
  std::vector<std::optional<double>> rho;
  std::vector<double> eps_cv;
};
/// {"rho": [0.2, ..., "aitken"], "eps_cv": [...]}; ConfigError when both lists are empty.
SweepSpec parse_sweep(const nlohmann::json& j);

struct SweepRun {
  std::string id;
  RunConfig config;
  RunOutput output;
};

/// Cross product of the sweep lists sharing one problem and reference, up to
/// jobs runs at a time. Writes sweep.csv (run_id,k,error) and one directory per run.
std::vector<SweepRun> command_sweep(const RunConfig& c, const SweepSpec& spec, int jobs);

/// Error indicator of solution file a against solution file b taken as reference.
double command_compare(const RunConfig& c, const std::string& a, const std::string& b);

} // namespace patchdd
