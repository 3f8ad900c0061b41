/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/patchdd.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include <omp.h>

#include "patchdd/commands.hpp"
#include "patchdd/error.hpp"

struct pdd_config {
  patchdd::RunConfig config;
};

struct pdd_result {
  patchdd::RunOutput output;
};

namespace {

thread_local std::string g_last_error;

pdd_status fail(pdd_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename F>
pdd_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const patchdd::ConfigError& e) {
    return fail(PDD_ERR_CONFIG, e.what());
  } catch (const patchdd::IoError& e) {
    return fail(PDD_ERR_IO, e.what());
  } catch (const patchdd::NewtonDivergedError& e) {
    return fail(PDD_ERR_NOT_CONVERGED, e.what());
  } catch (const patchdd::MeshError& e) {
    return fail(PDD_ERR_CONFIG, e.what());
  } catch (const patchdd::AssemblyError& e) {
    return fail(PDD_ERR_NUMERIC, e.what());
  } catch (const patchdd::UnstableFitError& e) {
    return fail(PDD_ERR_NUMERIC, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(PDD_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(PDD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PDD_ERR_INTERNAL, "unknown error");
  }
}

pdd_status null_arg(const char* name) {
  return fail(PDD_ERR_CONFIG, std::string("argument '") + name + "' is null");
}

} // namespace

extern "C" {

const char* pdd_last_error(void) { return g_last_error.c_str(); }

const char* pdd_version(void) { return "1.0.0"; }

void pdd_set_threads(int n) {
  omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
}

pdd_status pdd_config_load(const char* path, pdd_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new pdd_config{patchdd::load_config(path)};
    return PDD_OK;
  });
}

pdd_status pdd_config_from_json(const char* text, pdd_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw patchdd::ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    *out = new pdd_config{patchdd::config_from_json(j)};
    return PDD_OK;
  });
}

void pdd_config_free(pdd_config* cfg) { delete cfg; }

pdd_status pdd_config_set_seed(pdd_config* cfg, uint64_t seed) {
  if (!cfg) return null_arg("cfg");
  cfg->config.sampling_seed = seed;
  return PDD_OK;
}

pdd_status pdd_config_set_output_dir(pdd_config* cfg, const char* dir) {
  if (!cfg) return null_arg("cfg");
  if (!dir) return null_arg("dir");
  cfg->config.output_dir = dir;
  return PDD_OK;
}

pdd_status pdd_config_set_reference(pdd_config* cfg, const char* path) {
  if (!cfg) return null_arg("cfg");
  cfg->config.reference_path = path ? path : "";
  return PDD_OK;
}

pdd_status pdd_config_to_json(const pdd_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    const std::string text = patchdd::config_to_json(cfg->config).dump(2);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return PDD_OK;
  });
}

pdd_status pdd_config_hash(const pdd_config* cfg, char out[17]) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    const std::string h = patchdd::config_hash(cfg->config);
    std::memcpy(out, h.c_str(), 17);
    return PDD_OK;
  });
}

void pdd_string_free(char* s) { delete[] s; }

pdd_status pdd_run(const pdd_config* cfg, pdd_result** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto* res = new pdd_result{patchdd::command_run(cfg->config)};
    *out = res;
    if (!res->output.failure.empty()) return fail(PDD_ERR_NOT_CONVERGED, res->output.failure);
    if (!res->output.converged) {
      return fail(PDD_ERR_NOT_CONVERGED, "local fits did not reach the cross-validation tolerance");
    }
    return PDD_OK;
  });
}

void pdd_result_free(pdd_result* res) { delete res; }

size_t pdd_result_iterations(const pdd_result* res) {
  return res ? res->output.state.history.size() : 0;
}

int pdd_result_converged(const pdd_result* res) { return res && res->output.converged ? 1 : 0; }

pdd_status pdd_result_row(const pdd_result* res, size_t k, double* rho, double* error) {
  if (!res) return null_arg("res");
  const auto& h = res->output.state.history;
  if (k < 1 || k > h.size()) return fail(PDD_ERR_CONFIG, "iteration index out of range");
  if (rho) *rho = h[k - 1].rho;
  if (error) *error = h[k - 1].error;
  return PDD_OK;
}

pdd_status pdd_reference(const pdd_config* cfg, size_t* samples) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const patchdd::ReferenceOutput out = patchdd::command_reference(cfg->config);
    if (samples) *samples = out.solution.samples;
    if (!out.solution.converged) {
      return fail(PDD_ERR_NOT_CONVERGED, "reference fit did not reach the cross-validation tolerance");
    }
    return PDD_OK;
  });
}

pdd_status pdd_sweep(const pdd_config* cfg, const char* sweep_json, int jobs) {
  if (!cfg) return null_arg("cfg");
  if (!sweep_json) return null_arg("sweep_json");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(sweep_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw patchdd::ConfigError(std::string("sweep specification is not valid JSON: ") + e.what());
    }
    const auto runs = patchdd::command_sweep(cfg->config, patchdd::parse_sweep(j), jobs);
    for (const auto& r : runs) {
      if (!r.output.failure.empty()) return fail(PDD_ERR_NOT_CONVERGED, r.id + ": " + r.output.failure);
      if (!r.output.converged) return fail(PDD_ERR_NOT_CONVERGED, r.id + ": local fits did not converge");
    }
    return PDD_OK;
  });
}

pdd_status pdd_compare(const pdd_config* cfg, const char* a, const char* b, double* error) {
  if (!cfg) return null_arg("cfg");
  if (!a) return null_arg("a");
  if (!b) return null_arg("b");
  if (!error) return null_arg("error");
  return guarded([&] {
    *error = patchdd::command_compare(cfg->config, a, b);
    return PDD_OK;
  });
}

} // extern "C"
