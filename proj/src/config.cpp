/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "patchdd/error.hpp"

namespace patchdd {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Reads fields of one JSON object, rejecting unknown keys.
class Section {
public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }
  /// Rejects keys that were never asked for.
  void done() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown field '" + join(path_, key) + "'");
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return join(path_, key); }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError("field '" + path(key) + "' must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError("field '" + path(key) + "' must be finite");
  }
  template <typename T>
  void integer(const std::string& key, T& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      throw ConfigError("field '" + path(key) + "' must be a nonnegative integer");
    }
    out = static_cast<T>(v.get<unsigned long long>());
  }
  void boolean(const std::string& key, bool& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError("field '" + path(key) + "' must be true or false");
    out = v.get<bool>();
  }
  void string(const std::string& key, std::string& out) {
    if (!has(key)) return;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError("field '" + path(key) + "' must be a string");
    out = v.get<std::string>();
  }

private:
  std::string where() const { return path_.empty() ? "configuration" : "field '" + path_ + "'"; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("field '" + field + "' " + what);
}

const char* weight_mode_name(WeightMode m) {
  switch (m) {
    case WeightMode::isotropic: return "isotropic";
    case WeightMode::anisotropic: return "anisotropic";
    case WeightMode::explicit_list: return "list";
  }
  return "";
}

const char* fictitious_name(FictitiousRule r) {
  switch (r) {
    case FictitiousRule::mean: return "mean";
    case FictitiousRule::unit: return "unit";
    case FictitiousRule::fixed: return "fixed";
  }
  return "";
}

} // namespace

void validate_config(const RunConfig& c) {
  require(c.domain.width() > 0.0 && c.domain.height() > 0.0, "domain", "must have positive extent");
  require(c.patch_count >= 1, "patches.count", "must be at least 1");
  if (c.weight_mode == WeightMode::explicit_list) {
    require(c.weights.size() == c.patch_count, "patches.weights", "must list one weight per patch");
  }
  for (double g : make_layout(c).weights) {
    require(g >= 0.0 && g <= 1.0, "patches.weights", "must lie in [0,1]");
  }
  require(c.global_size_H > 0.0, "mesh.global_size_H", "must be positive");
  require(c.patch_size_h > 0.0, "mesh.patch_size_h", "must be positive");
  const double ratio = c.global_size_H / c.patch_size_h;
  require(ratio >= 1.0 - 1e-12 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio,
          "mesh.patch_size_h", "must divide mesh.global_size_H");
  require(c.fixed_diffusion >= 0.0, "inputs.fixed_diffusion", "must be nonnegative");
  require(c.fixed_reaction >= 0.0, "inputs.fixed_reaction", "must be nonnegative");
  require(c.reaction_scale >= 0.0, "inputs.reaction_scale", "must be nonnegative");
  require(c.fictitious != FictitiousRule::fixed || c.input_mode == InputMode::fixed,
          "fictitious_coefficient", "'fixed' requires inputs.mode 'fixed'");

  require(c.relaxation.rho > 0.0, "relaxation.rho", "must be positive");
  require(c.relaxation.rho_inf > 0.0, "relaxation.rho_inf", "must be positive");
  require(c.relaxation.rho_sup >= c.relaxation.rho_inf, "relaxation.rho_sup", "must be at least relaxation.rho_inf");

  const AdaptiveParams& a = c.adaptive;
  require(a.eps_cv > 0.0, "adaptive.eps_cv", "must be positive");
  require(a.eps_stagn > 0.0, "adaptive.eps_stagn", "must be positive");
  require(a.eps_overfit > 0.0, "adaptive.eps_overfit", "must be positive");
  require(a.theta >= 0.0 && a.theta <= 1.0, "adaptive.theta", "must lie in [0,1]");
  require(a.p_add > 0.0, "adaptive.p_add", "must be positive");
  require(a.initial_samples >= 1, "adaptive.initial_samples", "must be at least 1");
  require(a.max_samples >= a.initial_samples, "adaptive.max_samples", "must be at least adaptive.initial_samples");
  require(a.max_rounds >= 1, "adaptive.max_rounds", "must be at least 1");
  require(c.reference_eps_cv > 0.0, "reference.eps_cv", "must be positive");

  require(c.newton.tol > 0.0, "newton.tol", "must be positive");
  require(c.newton.max_iterations >= 1, "newton.max_iterations", "must be at least 1");
  require(c.newton.max_halvings >= 0, "newton.max_halvings", "must be nonnegative");
  require(c.k_max >= 0, "iterations.k_max", "must be nonnegative");
  require(c.early_stop_tol > 0.0, "iterations.early_stop_tol", "must be positive");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "");
  if (root.has("domain")) {
    Section s(root.raw("domain"), "domain");
    s.number("x_min", c.domain.x_min);
    s.number("x_max", c.domain.x_max);
    s.number("y_min", c.domain.y_min);
    s.number("y_max", c.domain.y_max);
    s.done();
  }
  if (root.has("patches")) {
    Section s(root.raw("patches"), "patches");
    std::string layout = "benchmark";
    s.string("layout", layout);
    require(layout == "benchmark", s.path("layout"), "must be 'benchmark'");
    s.integer("count", c.patch_count);
    if (s.has("weights")) {
      const json& w = s.raw("weights");
      if (w.is_string()) {
        const std::string mode = w.get<std::string>();
        if (mode == "isotropic") {
          c.weight_mode = WeightMode::isotropic;
        } else if (mode == "anisotropic") {
          c.weight_mode = WeightMode::anisotropic;
        } else {
          throw ConfigError("field 'patches.weights' must be 'isotropic', 'anisotropic' or a list");
        }
      } else if (w.is_array()) {
        c.weight_mode = WeightMode::explicit_list;
        for (std::size_t k = 0; k < w.size(); ++k) {
          require(w[k].is_number(), "patches.weights[" + std::to_string(k) + "]", "must be a number");
          c.weights.push_back(w[k].get<double>());
        }
      } else {
        throw ConfigError("field 'patches.weights' must be 'isotropic', 'anisotropic' or a list");
      }
    }
    s.done();
  }
  if (root.has("mesh")) {
    Section s(root.raw("mesh"), "mesh");
    s.number("global_size_H", c.global_size_H);
    s.number("patch_size_h", c.patch_size_h);
    s.done();
  }
  root.number("source_f", c.source_f);
  if (root.has("fictitious_coefficient")) {
    std::string rule;
    root.string("fictitious_coefficient", rule);
    if (rule == "mean") {
      c.fictitious = FictitiousRule::mean;
    } else if (rule == "unit") {
      c.fictitious = FictitiousRule::unit;
    } else if (rule == "fixed") {
      c.fictitious = FictitiousRule::fixed;
    } else {
      throw ConfigError("field 'fictitious_coefficient' must be 'mean', 'unit' or 'fixed'");
    }
  }
  if (root.has("inputs")) {
    Section s(root.raw("inputs"), "inputs");
    std::string mode = "random";
    s.string("mode", mode);
    if (mode == "random") {
      c.input_mode = InputMode::random;
    } else if (mode == "fixed") {
      c.input_mode = InputMode::fixed;
    } else {
      throw ConfigError("field 'inputs.mode' must be 'random' or 'fixed'");
    }
    s.number("fixed_diffusion", c.fixed_diffusion);
    s.number("fixed_reaction", c.fixed_reaction);
    s.number("reaction_scale", c.reaction_scale);
    s.done();
  }
  if (root.has("relaxation")) {
    Section s(root.raw("relaxation"), "relaxation");
    std::string strategy = "aitken";
    s.string("strategy", strategy);
    if (strategy == "aitken") {
      c.relaxation.kind = RelaxationStrategy::Kind::aitken;
    } else if (strategy == "fixed") {
      c.relaxation.kind = RelaxationStrategy::Kind::fixed;
    } else {
      throw ConfigError("field 'relaxation.strategy' must be 'aitken' or 'fixed'");
    }
    s.number("rho", c.relaxation.rho);
    s.number("rho_inf", c.relaxation.rho_inf);
    s.number("rho_sup", c.relaxation.rho_sup);
    s.done();
  }
  if (root.has("adaptive")) {
    Section s(root.raw("adaptive"), "adaptive");
    s.number("eps_cv", c.adaptive.eps_cv);
    s.number("eps_stagn", c.adaptive.eps_stagn);
    s.number("eps_overfit", c.adaptive.eps_overfit);
    s.number("theta", c.adaptive.theta);
    s.number("p_add", c.adaptive.p_add);
    s.integer("initial_samples", c.adaptive.initial_samples);
    s.integer("max_samples", c.adaptive.max_samples);
    s.integer("max_rounds", c.adaptive.max_rounds);
    if (s.has("loo_scale")) {
      std::string scale;
      s.string("loo_scale", scale);
      if (scale == "rms") {
        c.adaptive.scale = LooScale::rms;
      } else if (scale == "mse") {
        c.adaptive.scale = LooScale::mse;
      } else {
        throw ConfigError("field 'adaptive.loo_scale' must be 'rms' or 'mse'");
      }
    }
    s.done();
  }
  if (root.has("reference")) {
    Section s(root.raw("reference"), "reference");
    s.number("eps_cv", c.reference_eps_cv);
    s.done();
  }
  if (root.has("newton")) {
    Section s(root.raw("newton"), "newton");
    s.number("tol", c.newton.tol);
    s.integer("max_iterations", c.newton.max_iterations);
    s.integer("max_halvings", c.newton.max_halvings);
    s.done();
  }
  if (root.has("iterations")) {
    Section s(root.raw("iterations"), "iterations");
    s.integer("k_max", c.k_max);
    s.boolean("early_stop", c.early_stop);
    s.number("early_stop_tol", c.early_stop_tol);
    s.done();
  }
  if (root.has("seeds")) {
    Section s(root.raw("seeds"), "seeds");
    s.integer("sampling", c.sampling_seed);
    s.integer("patch_offset", c.patch_stream_offset);
    s.integer("reference_stream", c.reference_stream);
    s.done();
  }
  root.string("output_dir", c.output_dir);
  root.string("reference_path", c.reference_path);
  root.done();
  validate_config(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["domain"] = {{"x_min", c.domain.x_min}, {"x_max", c.domain.x_max},
                 {"y_min", c.domain.y_min}, {"y_max", c.domain.y_max}};
  json patches = {{"layout", "benchmark"}, {"count", c.patch_count}};
  if (c.weight_mode == WeightMode::explicit_list) {
    patches["weights"] = c.weights;
  } else {
    patches["weights"] = weight_mode_name(c.weight_mode);
  }
  j["patches"] = patches;
  j["mesh"] = {{"global_size_H", c.global_size_H}, {"patch_size_h", c.patch_size_h}};
  j["source_f"] = c.source_f;
  j["fictitious_coefficient"] = fictitious_name(c.fictitious);
  j["inputs"] = {{"mode", c.input_mode == InputMode::random ? "random" : "fixed"},
                 {"fixed_diffusion", c.fixed_diffusion},
                 {"fixed_reaction", c.fixed_reaction},
                 {"reaction_scale", c.reaction_scale}};
  j["relaxation"] = {
      {"strategy", c.relaxation.kind == RelaxationStrategy::Kind::aitken ? "aitken" : "fixed"},
      {"rho", c.relaxation.rho},
      {"rho_inf", c.relaxation.rho_inf},
      {"rho_sup", c.relaxation.rho_sup}};
  j["adaptive"] = {{"eps_cv", c.adaptive.eps_cv},
                   {"eps_stagn", c.adaptive.eps_stagn},
                   {"eps_overfit", c.adaptive.eps_overfit},
                   {"theta", c.adaptive.theta},
                   {"p_add", c.adaptive.p_add},
                   {"initial_samples", c.adaptive.initial_samples},
                   {"max_samples", c.adaptive.max_samples},
                   {"max_rounds", c.adaptive.max_rounds},
                   {"loo_scale", c.adaptive.scale == LooScale::rms ? "rms" : "mse"}};
  j["reference"] = {{"eps_cv", c.reference_eps_cv}};
  j["newton"] = {{"tol", c.newton.tol},
                 {"max_iterations", c.newton.max_iterations},
                 {"max_halvings", c.newton.max_halvings}};
  j["iterations"] = {{"k_max", c.k_max},
                     {"early_stop", c.early_stop},
                     {"early_stop_tol", c.early_stop_tol}};
  j["seeds"] = {{"sampling", c.sampling_seed},
                {"patch_offset", c.patch_stream_offset},
                {"reference_stream", c.reference_stream}};
  j["output_dir"] = c.output_dir;
  j["reference_path"] = c.reference_path;
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open configuration file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("configuration file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  json j = config_to_json(c);
  j.erase("output_dir");
  j.erase("reference_path");
  const std::string text = j.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PatchLayout make_layout(const RunConfig& c) {
  switch (c.weight_mode) {
    case WeightMode::isotropic: return benchmark_layout(isotropic_weights(c.patch_count));
    case WeightMode::anisotropic: return benchmark_layout(anisotropic_weights(c.patch_count));
    case WeightMode::explicit_list: return benchmark_layout(c.weights);
  }
  return {};
}

ProblemSetup make_setup(const RunConfig& c) {
  ProblemSetup s;
  s.domain = c.domain;
  s.layout = make_layout(c);
  s.coarse_size = c.global_size_H;
  s.fine_size = c.patch_size_h;
  s.source = c.source_f;
  s.fictitious = c.fictitious;
  for (double g : s.layout.weights) {
    CoefficientModel m;
    m.gamma = g;
    m.reaction_scale = c.reaction_scale;
    if (c.input_mode == InputMode::fixed) {
      m.fixed_diffusion = c.fixed_diffusion;
      m.fixed_reaction = c.fixed_reaction;
    }
    s.models.push_back(m);
  }
  return s;
}

IterateOptions make_iterate_options(const RunConfig& c) {
  IterateOptions o;
  o.relaxation = c.relaxation;
  o.adaptive = c.adaptive;
  o.adaptive.seed = c.sampling_seed;
  o.patch_stream_offset = c.patch_stream_offset;
  o.newton = c.newton;
  o.k_max = c.k_max;
  o.early_stop = c.early_stop;
  o.early_stop_tol = c.early_stop_tol;
  return o;
}

AdaptiveParams make_reference_params(const RunConfig& c) {
  AdaptiveParams p = c.adaptive;
  p.eps_cv = c.reference_eps_cv;
  p.seed = c.sampling_seed;
  p.stream = c.reference_stream;
  return p;
}

} // namespace patchdd
