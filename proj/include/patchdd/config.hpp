/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchdd/global_local.hpp"

namespace patchdd {

enum class WeightMode { isotropic, anisotropic, explicit_list };
enum class InputMode { random, fixed };

/// Everything a run needs. Lengths are dimensionless.
struct RunConfig {
  Box domain{0.0, 2.0, 0.0, 16.0};
  std::size_t patch_count = 8;
  WeightMode weight_mode = WeightMode::isotropic;
  std::vector<double> weights;  ///< used with WeightMode::explicit_list
  double global_size_H = 0.1;
  double patch_size_h = 0.05;
  double source_f = 1.0;
  FictitiousRule fictitious = FictitiousRule::mean;

  InputMode input_mode = InputMode::random;
  double fixed_diffusion = 0.5;  ///< input a when input_mode is fixed
  double fixed_reaction = 0.5;   ///< input b when input_mode is fixed
  double reaction_scale = 1.0;

  RelaxationStrategy relaxation;
  AdaptiveParams adaptive;       ///< seed/stream are filled from the seeds below
  double reference_eps_cv = 1e-6;
  NewtonOptions newton;
  int k_max = 20;
  bool early_stop = false;
  double early_stop_tol = 1e-12;

  std::uint64_t sampling_seed = 1;
  std::uint64_t patch_stream_offset = 1;
  std::uint64_t reference_stream = 0;

  std::string output_dir = "out";
  std::string reference_path;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the offending field path, e.g. "adaptive.theta".
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);
/// Range checks shared by the parser and programmatic callers.
void validate_config(const RunConfig& c);

/// FNV-1a 64 of the canonical JSON without output_dir and reference_path, as 16 hex digits.
std::string config_hash(const RunConfig& c);

PatchLayout make_layout(const RunConfig& c);
ProblemSetup make_setup(const RunConfig& c);
IterateOptions make_iterate_options(const RunConfig& c);
AdaptiveParams make_reference_params(const RunConfig& c);

} // namespace patchdd
