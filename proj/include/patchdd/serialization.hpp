/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchdd/global_local.hpp"
#include "patchdd/sparse_poly.hpp"

namespace patchdd {

/// {m, indices, coefficients, loo_errors, seed, samples}; coefficients are rows per index.
nlohmann::json approx_to_json(const PceApprox& a);
PceApprox approx_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const PceField& f);
PceField field_from_json(const nlohmann::json& j);

/// A global field with its local companions, as written by run and reference.
struct SolutionFile {
  std::string kind;         ///< "run" or "reference"
  std::string config_hash;
  PceField u;
  std::vector<PceApprox> w;
  std::vector<PceApprox> lambda;
  std::vector<std::string> patch_mesh_ids;
  std::size_t samples = 0;  ///< N_ref for references
};

nlohmann::json solution_to_json(const SolutionFile& s);
SolutionFile solution_from_json(const nlohmann::json& j);
void write_solution(const std::string& path, const SolutionFile& s);
/// Throws IoError when the file cannot be read or parsed.
SolutionFile read_solution(const std::string& path);

/// Max partial degrees and dimension of U, w_1, lambda_1, ..., w_Q, lambda_Q.
struct DegreeRow {
  std::string name;
  std::vector<int> degrees;
  std::size_t dim = 0;
};
std::vector<DegreeRow> degree_table(const PceField& u, const std::vector<PceApprox>& w,
                                    const std::vector<PceApprox>& lambda);
nlohmann::json degree_table_json(const std::vector<DegreeRow>& rows);
/// Header solution,p_1..p_m,dim.
void write_degree_table_csv(std::ostream& os, const std::vector<DegreeRow>& rows,
                            const std::string& config_hash);

/// First line "# config_hash=<hex>", then k,rho_k,error_indicator,N_q...,dim_w_q...,dim_lambda_q...
void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows,
                       std::size_t num_patches, const std::string& config_hash);

/// xi_1..xi_m columns followed by y_1..y_n.
void write_sample_log_csv(std::ostream& os, const SampleLog& log);

/// Writes text to path atomically enough for our purposes (truncate + write); IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

} // namespace patchdd
