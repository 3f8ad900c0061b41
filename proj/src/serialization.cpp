/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "patchdd/error.hpp"

namespace patchdd {

using nlohmann::json;

namespace {

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_rows(const json& rows, Eigen::Index cols_hint) {
  if (!rows.is_array()) throw IoError("coefficients must be an array of rows");
  Eigen::Index cols = rows.empty() ? cols_hint : static_cast<Eigen::Index>(rows[0].size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != cols) {
      throw IoError("coefficient rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = rows[r][c].get<double>();
  }
  return m;
}

// Infinite LOO errors are stored as null since JSON has no infinity.
json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::isfinite(v[k])) {
      out.push_back(v[k]);
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    v[static_cast<Eigen::Index>(k)] = j[k].is_null() ? std::numeric_limits<double>::infinity() : j[k].get<double>();
  }
  return v;
}

MultiIndexSet indices_from_json(const json& j, std::size_t m) {
  MultiIndexSet set(m);
  for (const auto& a : j) {
    MultiIndex idx = a.get<MultiIndex>();
    if (idx.size() != m) throw IoError("multi-index length does not match m");
    if (!set.insert(idx)) throw IoError("duplicate multi-index");
  }
  return set;
}

std::ostream& number(std::ostream& os, double v) {
  if (std::isnan(v)) return os << "nan";
  return os << v;
}

} // namespace

json approx_to_json(const PceApprox& a) {
  return {{"m", a.indices.dim()},
          {"indices", a.indices.indices()},
          {"coefficients", matrix_rows(a.coeffs)},
          {"loo_errors", vector_json(a.loo)},
          {"seed", a.seed},
          {"samples", a.samples}};
}

PceApprox approx_from_json(const json& j) {
  try {
    PceApprox a;
    const std::size_t m = j.at("m").get<std::size_t>();
    a.indices = indices_from_json(j.at("indices"), m);
    a.coeffs = matrix_from_rows(j.at("coefficients"), 0);
    if (static_cast<std::size_t>(a.coeffs.rows()) != a.indices.size()) {
      throw IoError("coefficient rows do not match the index set");
    }
    a.loo = vector_from_json(j.at("loo_errors"));
    a.seed = j.value("seed", std::uint64_t{0});
    a.samples = j.value("samples", std::size_t{0});
    return a;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed expansion: ") + e.what());
  }
}

json field_to_json(const PceField& f) {
  return {{"m", f.indices.dim()},
          {"indices", f.indices.indices()},
          {"coefficients", matrix_rows(f.coeffs)},
          {"mesh_id", f.mesh_id}};
}

PceField field_from_json(const json& j) {
  try {
    PceField f;
    const std::size_t m = j.at("m").get<std::size_t>();
    f.indices = indices_from_json(j.at("indices"), m);
    f.coeffs = matrix_from_rows(j.at("coefficients"), 0);
    if (static_cast<std::size_t>(f.coeffs.rows()) != f.indices.size()) {
      throw IoError("coefficient rows do not match the index set");
    }
    f.mesh_id = j.value("mesh_id", std::string());
    return f;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed field: ") + e.what());
  }
}

json solution_to_json(const SolutionFile& s) {
  json patches = json::array();
  for (std::size_t q = 0; q < s.w.size(); ++q) {
    patches.push_back({{"mesh_id", q < s.patch_mesh_ids.size() ? s.patch_mesh_ids[q] : std::string()},
                       {"w", approx_to_json(s.w[q])},
                       {"lambda", approx_to_json(s.lambda[q])}});
  }
  return {{"kind", s.kind},
          {"config_hash", s.config_hash},
          {"samples", s.samples},
          {"global", field_to_json(s.u)},
          {"patches", patches}};
}

SolutionFile solution_from_json(const json& j) {
  try {
    SolutionFile s;
    s.kind = j.at("kind").get<std::string>();
    s.config_hash = j.at("config_hash").get<std::string>();
    s.samples = j.value("samples", std::size_t{0});
    s.u = field_from_json(j.at("global"));
    for (const auto& p : j.at("patches")) {
      s.patch_mesh_ids.push_back(p.value("mesh_id", std::string()));
      s.w.push_back(approx_from_json(p.at("w")));
      s.lambda.push_back(approx_from_json(p.at("lambda")));
    }
    return s;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed solution file: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_solution(const std::string& path, const SolutionFile& s) {
  write_text_file(path, solution_to_json(s).dump() + "\n");
}

SolutionFile read_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open solution file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("solution file '" + path + "' is not valid JSON: " + e.what());
  }
  return solution_from_json(j);
}

std::vector<DegreeRow> degree_table(const PceField& u, const std::vector<PceApprox>& w,
                                    const std::vector<PceApprox>& lambda) {
  std::vector<DegreeRow> rows;
  rows.push_back({"U", u.indices.max_partial_degrees(), u.indices.size()});
  for (std::size_t q = 0; q < w.size(); ++q) {
    const std::string n = std::to_string(q + 1);
    rows.push_back({"w_" + n, w[q].indices.max_partial_degrees(), w[q].indices.size()});
    if (q < lambda.size()) {
      rows.push_back({"lambda_" + n, lambda[q].indices.max_partial_degrees(), lambda[q].indices.size()});
    }
  }
  return rows;
}

json degree_table_json(const std::vector<DegreeRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"solution", r.name}, {"degrees", r.degrees}, {"dim", r.dim}});
  return out;
}

void write_degree_table_csv(std::ostream& os, const std::vector<DegreeRow>& rows,
                            const std::string& config_hash) {
  os << "# config_hash=" << config_hash << '\n' << "solution";
  const std::size_t m = rows.empty() ? 0 : rows.front().degrees.size();
  for (std::size_t i = 1; i <= m; ++i) os << ",p_" << i;
  os << ",dim\n";
  for (const auto& r : rows) {
    os << r.name;
    for (int d : r.degrees) os << ',' << d;
    os << ',' << r.dim << '\n';
  }
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows,
                       std::size_t num_patches, const std::string& config_hash) {
  os.precision(17);
  os << "# config_hash=" << config_hash << '\n' << "k,rho_k,error_indicator";
  for (std::size_t q = 1; q <= num_patches; ++q) os << ",N_" << q;
  for (std::size_t q = 1; q <= num_patches; ++q) os << ",dim_w_" << q;
  for (std::size_t q = 1; q <= num_patches; ++q) os << ",dim_lambda_" << q;
  os << '\n';
  for (const auto& r : rows) {
    os << r.k << ',';
    number(os, r.rho) << ',';
    number(os, r.error);
    for (auto v : r.samples) os << ',' << v;
    for (auto v : r.dim_w) os << ',' << v;
    for (auto v : r.dim_lambda) os << ',' << v;
    os << '\n';
  }
}

void write_sample_log_csv(std::ostream& os, const SampleLog& log) {
  os.precision(17);
  for (Eigen::Index i = 0; i < log.xi.cols(); ++i) os << (i ? "," : "") << "xi_" << i + 1;
  for (Eigen::Index i = 0; i < log.y.cols(); ++i) os << ",y_" << i + 1;
  os << '\n';
  for (Eigen::Index l = 0; l < log.xi.rows(); ++l) {
    for (Eigen::Index i = 0; i < log.xi.cols(); ++i) os << (i ? "," : "") << log.xi(l, i);
    for (Eigen::Index i = 0; i < log.y.cols(); ++i) os << ',' << log.y(l, i);
    os << '\n';
  }
}

} // namespace patchdd
