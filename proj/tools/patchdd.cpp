/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "patchdd/patchdd.h"

namespace {

int exit_code(pdd_status s) {
  switch (s) {
    case PDD_OK: return 0;
    case PDD_ERR_NOT_CONVERGED:
    case PDD_ERR_NUMERIC: return 2;
    default: return 1;
  }
}

int report(pdd_status s) {
  if (s != PDD_OK) std::cerr << "patchdd: " << pdd_last_error() << '\n';
  return exit_code(s);
}

struct Common {
  std::string config;
  std::string reference;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c, bool with_reference) {
  cmd->add_option("--config", c.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  if (with_reference) cmd->add_option("--reference", c.reference, "Reference solution file");
  cmd->add_option("--out", c.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed-override", c.seed, "Sampling seed (overrides seeds.sampling)");
}

// Returns a configured handle or nullptr after reporting the error.
pdd_config* load(const Common& c, int& code) {
  pdd_config* cfg = nullptr;
  pdd_status s = pdd_config_load(c.config.c_str(), &cfg);
  if (s == PDD_OK && !c.out.empty()) s = pdd_config_set_output_dir(cfg, c.out.c_str());
  if (s == PDD_OK && !c.reference.empty()) s = pdd_config_set_reference(cfg, c.reference.c_str());
  if (s == PDD_OK && c.seed) s = pdd_config_set_seed(cfg, *c.seed);
  if (s != PDD_OK) {
    code = report(s);
    pdd_config_free(cfg);
    return nullptr;
  }
  return cfg;
}

std::string read_sweep(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return arg;
  std::ifstream in(arg);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("PATCHDD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) pdd_set_threads(n);
  }

  CLI::App app{"Global-local solver for stochastic patch problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pdd_version()));

  Common run_opts, ref_opts, sweep_opts, cmp_opts;
  auto* run = app.add_subcommand("run", "Run the global-local iterations");
  add_common(run, run_opts, true);

  auto* reference = app.add_subcommand("reference", "Build the reference solution");
  add_common(reference, ref_opts, false);

  auto* sweep = app.add_subcommand("sweep", "Run a relaxation / tolerance sweep");
  add_common(sweep, sweep_opts, true);
  std::string sweep_spec;
  int jobs = 1;
  sweep->add_option("--sweep", sweep_spec, "Sweep JSON file or inline JSON object")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "Error indicator of one solution against another");
  compare->add_option("--config", cmp_opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  std::string sol_a, sol_b;
  compare->add_option("solution", sol_a, "Solution file to evaluate")->required()->check(CLI::ExistingFile);
  compare->add_option("reference", sol_b, "Solution file taken as reference")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  int code = 0;
  if (*run) {
    pdd_config* cfg = load(run_opts, code);
    if (!cfg) return code;
    pdd_result* res = nullptr;
    const pdd_status s = pdd_run(cfg, &res);
    if (res) {
      const size_t n = pdd_result_iterations(res);
      for (size_t k = 1; k <= n; ++k) {
        double rho = 0.0, err = 0.0;
        pdd_result_row(res, k, &rho, &err);
        std::printf("k=%zu rho=%.6g error=%.6e\n", k, rho, err);
      }
    }
    pdd_result_free(res);
    pdd_config_free(cfg);
    return report(s);
  }
  if (*reference) {
    pdd_config* cfg = load(ref_opts, code);
    if (!cfg) return code;
    size_t samples = 0;
    const pdd_status s = pdd_reference(cfg, &samples);
    if (s == PDD_OK || s == PDD_ERR_NOT_CONVERGED) std::printf("N_ref=%zu\n", samples);
    pdd_config_free(cfg);
    return report(s);
  }
  if (*sweep) {
    const std::string spec = read_sweep(sweep_spec);
    if (spec.empty()) {
      std::cerr << "patchdd: cannot read sweep specification '" << sweep_spec << "'\n";
      return 1;
    }
    pdd_config* cfg = load(sweep_opts, code);
    if (!cfg) return code;
    const pdd_status s = pdd_sweep(cfg, spec.c_str(), jobs);
    pdd_config_free(cfg);
    return report(s);
  }
  if (*compare) {
    pdd_config* cfg = load(cmp_opts, code);
    if (!cfg) return code;
    double err = 0.0;
    const pdd_status s = pdd_compare(cfg, sol_a.c_str(), sol_b.c_str(), &err);
    if (s == PDD_OK) std::printf("%.17g\n", err);
    pdd_config_free(cfg);
    return report(s);
  }
  return 1;
}
