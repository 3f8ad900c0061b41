/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "patchdd/commands.hpp"
#include "patchdd/config.hpp"
#include "patchdd/error.hpp"
#include "patchdd/serialization.hpp"

using namespace patchdd;
using nlohmann::json;

namespace {

std::string config_error(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults round trip through JSON") {
    const RunConfig c;
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(config_from_json(json::object()) == c);
  }

  TEST_CASE("non-default values round trip") {
    RunConfig c;
    c.weight_mode = WeightMode::explicit_list;
    c.weights = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    c.fictitious = FictitiousRule::unit;
    c.relaxation.kind = RelaxationStrategy::Kind::fixed;
    c.relaxation.rho = 0.4;
    c.adaptive.eps_cv = 1e-4;
    c.adaptive.scale = LooScale::mse;
    c.newton.max_iterations = 7;
    c.sampling_seed = 99;
    c.output_dir = "elsewhere";
    CHECK(config_from_json(config_to_json(c)) == c);
  }

  TEST_CASE("range errors name the field") {
    CHECK(config_error({{"adaptive", {{"theta", 1.3}}}}).find("adaptive.theta") != std::string::npos);
    CHECK(config_error({{"adaptive", {{"eps_cv", -1.0}}}}).find("adaptive.eps_cv") != std::string::npos);
    CHECK(config_error({{"relaxation", {{"strategy", "fixed"}, {"rho", 0.0}}}}).find("relaxation.rho") !=
          std::string::npos);
    CHECK(config_error({{"mesh", {{"global_size_H", 0.0}}}}).find("global_size_H") != std::string::npos);
    CHECK(config_error({{"patches", {{"weights", {1.0, 2.0}}}}}).find("weights") != std::string::npos);
  }

  TEST_CASE("unknown fields and wrong types are rejected") {
    CHECK(config_error({{"adaptive", {{"thetta", 0.5}}}}).find("thetta") != std::string::npos);
    CHECK(config_error({{"colour", "red"}}).find("colour") != std::string::npos);
    CHECK_FALSE(config_error({{"adaptive", {{"theta", "half"}}}}).empty());
    CHECK_FALSE(config_error({{"relaxation", {{"strategy", "magic"}}}}).empty());
  }

  TEST_CASE("hash is stable and ignores output paths") {
    RunConfig a, b;
    b.output_dir = "x";
    b.reference_path = "y.json";
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.sampling_seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(config_from_json(config_to_json(a))) == config_hash(a));
  }

  TEST_CASE("derived setup and options") {
    RunConfig c;
    c.weight_mode = WeightMode::anisotropic;
    c.input_mode = InputMode::fixed;
    c.sampling_seed = 5;
    const ProblemSetup s = make_setup(c);
    CHECK(s.models.size() == 8);
    CHECK(s.models[0].fixed_diffusion.value() == 0.5);
    CHECK(s.models[3].gamma == s.layout.weights[3]);
    CHECK(make_iterate_options(c).adaptive.seed == 5);
    const AdaptiveParams r = make_reference_params(c);
    CHECK(r.eps_cv == c.reference_eps_cv);
    CHECK(r.stream == c.reference_stream);
  }

  TEST_CASE("sweep specification") {
    CHECK_THROWS_WITH_AS(parse_sweep(json::object()), doctest::Contains("empty"), ConfigError);
    const SweepSpec s = parse_sweep({{"rho", {0.2, "aitken"}}, {"eps_cv", {1e-3}}});
    REQUIRE(s.rho.size() == 2);
    CHECK(s.rho[0].value() == 0.2);
    CHECK_FALSE(s.rho[1].has_value());
    CHECK(s.eps_cv == std::vector<double>{1e-3});
    CHECK_THROWS_AS(parse_sweep({{"rho", {"fast"}}}), ConfigError);
  }

  TEST_CASE("approximation JSON round trip keeps the bits") {
    PceApprox a;
    a.indices = MultiIndexSet::zero(3);
    a.indices.insert({0, 2, 1});
    a.coeffs.resize(2, 2);
    a.coeffs << 0.1, 1.0 / 3.0, -2.5e-17, 7.0;
    a.loo.resize(2);
    a.loo << 1e-5, std::numeric_limits<double>::infinity();
    a.samples = 12;
    a.seed = 4;
    const PceApprox b = approx_from_json(json::parse(approx_to_json(a).dump()));
    CHECK(b.indices == a.indices);
    CHECK(b.coeffs == a.coeffs);
    CHECK(b.loo[0] == a.loo[0]);
    CHECK(std::isinf(b.loo[1]));
    CHECK(b.samples == 12);
    CHECK(b.seed == 4);
  }

  TEST_CASE("solution file round trip") {
    SolutionFile s;
    s.kind = "reference";
    s.config_hash = "0123456789abcdef";
    s.u = PceField::zero(2, 3, "global");
    s.u.coeffs << 1.0, 2.0, 3.0;
    PceApprox w;
    w.indices = MultiIndexSet::zero(2);
    w.coeffs = Eigen::MatrixXd::Ones(1, 4);
    s.w = {w};
    s.lambda = {w};
    s.patch_mesh_ids = {"patch1"};
    s.samples = 9;
    const SolutionFile t = solution_from_json(json::parse(solution_to_json(s).dump()));
    CHECK(t.kind == s.kind);
    CHECK(t.config_hash == s.config_hash);
    CHECK(t.u.coeffs == s.u.coeffs);
    CHECK(t.u.mesh_id == "global");
    CHECK(t.w[0].coeffs == w.coeffs);
    CHECK(t.samples == 9);
    CHECK_THROWS_AS(read_solution("/nonexistent/solution.json"), IoError);
  }

  TEST_CASE("history and degree tables") {
    HistoryRow r;
    r.k = 1;
    r.rho = 1.0;
    r.error = std::numeric_limits<double>::quiet_NaN();
    r.samples = {3, 4};
    r.dim_w = {5, 6};
    r.dim_lambda = {7, 8};
    std::ostringstream os;
    write_history_csv(os, {r}, 2, "abc");
    CHECK(os.str() ==
          "# config_hash=abc\n"
          "k,rho_k,error_indicator,N_1,N_2,dim_w_1,dim_w_2,dim_lambda_1,dim_lambda_2\n"
          "1,1,nan,3,4,5,6,7,8\n");

    PceField u = PceField::zero(2, 1);
    u.indices.insert({2, 0});
    u.coeffs.conservativeResize(2, Eigen::NoChange);
    PceApprox w;
    w.indices = MultiIndexSet::zero(2);
    w.indices.insert({0, 1});
    const auto rows = degree_table(u, {w}, {w});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].name == "U");
    CHECK(rows[0].degrees == std::vector<int>{2, 0});
    CHECK(rows[1].name == "w_1");
    CHECK(rows[2].name == "lambda_1");
    CHECK(rows[1].dim == 2);
    std::ostringstream deg;
    write_degree_table_csv(deg, rows, "abc");
    CHECK(deg.str().find("solution,p_1,p_2,dim\n") != std::string::npos);
    CHECK(deg.str().find("U,2,0,2\n") != std::string::npos);
  }
}
