/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
// Acceptance gate: one PASS/FAIL line per criterion. The benchmark runs share
// one problem and one reference; the property criteria use independent oracles.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/SparseCholesky>

#include "patchdd/commands.hpp"
#include "patchdd/config.hpp"
#include "patchdd/error.hpp"
#include "patchdd/fem.hpp"
#include "patchdd/postproc.hpp"
#include "patchdd/serialization.hpp"

using namespace patchdd;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

void save_history(const fs::path& dir, const std::string& name, const RunOutput& out, std::size_t q) {
  std::ofstream os(dir / (name + ".csv"));
  write_history_csv(os, out.state.history, q, out.config_hash);
}

double error_at(const RunOutput& out, int k) {
  if (static_cast<int>(out.state.history.size()) < k) return std::numeric_limits<double>::quiet_NaN();
  return out.state.history[static_cast<std::size_t>(k - 1)].error;
}

// Shared isotropic benchmark state.
struct Bench {
  RunConfig config;
  std::unique_ptr<GlobalLocalProblem> problem;
  ReferenceSolution reference;
  std::map<std::string, RunOutput> runs;
};

RunOutput run_variant(Bench& b, const fs::path& dir, const std::string& name,
                      const std::function<void(RunConfig&)>& edit) {
  RunConfig c = b.config;
  edit(c);
  const auto t = std::chrono::steady_clock::now();
  RunOutput out = run_iterations(c, *b.problem, &b.reference.u);
  std::printf("  run %-14s %6.1f s  k=%zu%s\n", name.c_str(), seconds_since(t), out.state.history.size(),
              out.failure.empty() ? "" : (" failure: " + out.failure).c_str());
  std::fflush(stdout);
  save_history(dir, name, out, b.problem->num_patches());
  b.runs[name] = out;
  return out;
}

// ---------------------------------------------------------------- criteria 1-4

Verdict benchmark_reproduction(const RunOutput& r) {
  const double e3 = error_at(r, 3), e10 = error_at(r, 10);
  return {r.failure.empty() && e3 <= 2e-4 && e10 <= 2e-5,
          "k=3 " + fmt("%.3e", e3) + " (<= 2e-4), k=10 " + fmt("%.3e", e10) + " (<= 2e-5)"};
}

double plateau(const RunOutput& r) {
  double s = 0.0;
  for (int k = 15; k <= 20; ++k) s += error_at(r, k);
  return s / 6.0;
}

Verdict plateau_law(const RunOutput& r2, const RunOutput& r3, const RunOutput& r4) {
  const double p2 = plateau(r2), p3 = plateau(r3), p4 = plateau(r4);
  const bool ok = p2 <= 1e-2 && p3 <= 1e-3 && p4 <= 1e-4 && p2 > p3 && p3 > p4;
  return {ok, "plateaus " + fmt("%.3e", p2) + ", " + fmt("%.3e", p3) + ", " + fmt("%.3e", p4) +
                  " for eps_cv 1e-2, 1e-3, 1e-4"};
}

Verdict linear_two_iterations(const fs::path& dir) {
  RunConfig c;
  c.global_size_H = 0.1;
  c.patch_size_h = 0.1;
  c.fictitious = FictitiousRule::fixed;
  c.input_mode = InputMode::fixed;
  c.fixed_diffusion = 0.5;
  c.fixed_reaction = 0.0;
  c.reaction_scale = 0.0;
  c.relaxation.kind = RelaxationStrategy::Kind::fixed;
  c.relaxation.rho = 1.0;
  c.k_max = 3;
  const GlobalLocalProblem problem(make_setup(c));
  const ReferenceSolution ref = solve_reference(problem, make_reference_params(c), c.newton);
  const RunOutput out = run_iterations(c, problem, &ref.u);
  save_history(dir, "linear", out, problem.num_patches());
  const double e2 = error_at(out, 2);
  return {out.failure.empty() && e2 <= 1e-9, "k=2 error " + fmt("%.3e", e2) + " (<= 1e-9)"};
}

Verdict fixed_rho_ordering(const Bench& b) {
  auto e = [&](const char* n) { return error_at(b.runs.at(n), 10); };
  const double r02 = e("rho0.2"), r04 = e("rho0.4"), r08 = e("rho0.8"), r10 = e("rho1.0"), r18 = e("rho1.8");
  const bool ok = r02 > r04 && r04 > r08 && r18 > r10;
  return {ok, "k=10: 0.2 " + fmt("%.2e", r02) + ", 0.4 " + fmt("%.2e", r04) + ", 0.8 " + fmt("%.2e", r08) +
                  ", 1.0 " + fmt("%.2e", r10) + ", 1.8 " + fmt("%.2e", r18)};
}

// ---------------------------------------------------------------- criteria 5-7

MultiIndexSet grow_random(std::mt19937_64& gen, std::size_t m, std::size_t target) {
  MultiIndexSet a = MultiIndexSet::zero(m);
  while (a.size() < target) {
    const MultiIndexSet rm = reduced_margin(a);
    a.insert(rm[gen() % rm.size()]);
  }
  return a;
}

Verdict loo_oracle() {
  std::mt19937_64 gen(5150);
  std::normal_distribution<double> noise(0.0, 0.05);
  double worst = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t m = 1 + gen() % 4;
    const MultiIndexSet a = grow_random(gen, m, 1 + gen() % 15);
    const std::size_t n = std::min<std::size_t>(60, a.size() + 2 + gen() % 40);
    const Eigen::MatrixXd xi = CounterRng(900 + inst, 1).uniform_block(0, n, m);
    Eigen::MatrixXd y(static_cast<Eigen::Index>(n), 1);
    for (std::size_t l = 0; l < n; ++l) y(l, 0) = std::cos(xi(l, 0) + xi(l, m - 1)) + noise(gen);
    const Eigen::MatrixXd psi = design_matrix(a, xi);
    const LeastSquaresFit fit = ls_fit(psi, y);
    const Eigen::MatrixXd fast = loo_predicted_residuals(fit, psi, y);
    for (std::size_t l = 0; l < n; ++l) {
      Eigen::MatrixXd pm(static_cast<Eigen::Index>(n - 1), psi.cols());
      Eigen::VectorXd ym(static_cast<Eigen::Index>(n - 1));
      for (std::size_t r = 0, k = 0; r < n; ++r) {
        if (r == l) continue;
        pm.row(static_cast<Eigen::Index>(k)) = psi.row(static_cast<Eigen::Index>(r));
        ym[static_cast<Eigen::Index>(k++)] = y(static_cast<Eigen::Index>(r), 0);
      }
      const Eigen::VectorXd v = pm.colPivHouseholderQr().solve(ym);
      const double direct = psi.row(static_cast<Eigen::Index>(l)).dot(v) - y(static_cast<Eigen::Index>(l), 0);
      const double rel = std::abs(fast(static_cast<Eigen::Index>(l), 0) - direct) /
                         std::max(std::abs(direct), 1e-300);
      worst = std::max(worst, rel);
    }
  }
  return {worst <= 1e-9, "max relative deviation " + fmt("%.2e", worst) + " over 50 instances (<= 1e-9)"};
}

bool brute_monotone(const std::set<MultiIndex>& s) {
  for (const auto& b : s) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] == 0) continue;
      MultiIndex c = b;
      --c[i];
      if (!s.count(c)) return false;
    }
  }
  return true;
}

std::set<MultiIndex> as_set(const MultiIndexSet& a) { return {a.indices().begin(), a.indices().end()}; }

Verdict index_set_laws() {
  std::size_t sets = 0, mismatches = 0;
  for (std::size_t m = 1; m <= 3; ++m) {
    // Universe: total degree <= 3; candidates for margins: box {0..4}^m.
    std::vector<MultiIndex> universe, box;
    MultiIndex a(m, 0);
    while (true) {
      int s = 0;
      for (int v : a) s += v;
      box.push_back(a);
      if (s <= 3) universe.push_back(a);
      std::size_t j = 0;
      while (j < m && a[j] == 4) a[j++] = 0;
      if (j == m) break;
      ++a[j];
    }
    const std::size_t u = universe.size();
    // Every monotone subset containing 0, found by scanning all subsets of the
    // universe (at most 2^20).
    for (std::uint64_t mask = 0; mask < (1ULL << u); ++mask) {
      std::set<MultiIndex> s;
      for (std::size_t k = 0; k < u; ++k) {
        if (mask >> k & 1ULL) s.insert(universe[k]);
      }
      if (!s.count(MultiIndex(m, 0)) || !brute_monotone(s)) continue;
      ++sets;
      std::set<MultiIndex> mg, rmg;
      for (const auto& alpha : box) {
        if (s.count(alpha)) continue;
        bool any = false, all = true;
        for (std::size_t i = 0; i < m; ++i) {
          if (alpha[i] == 0) continue;
          MultiIndex c = alpha;
          --c[i];
          const bool in = s.count(c) != 0;
          any = any || in;
          all = all && in;
        }
        if (any) mg.insert(alpha);
        if (all) rmg.insert(alpha);
      }
      MultiIndexSet as(m);
      for (const auto& x : s) as.insert(x);
      if (as_set(margin(as)) != mg || as_set(reduced_margin(as)) != rmg) ++mismatches;
    }
  }
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t broken = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 1 + gen() % 6;
    MultiIndexSet a = grow_random(gen, m, 1 + gen() % 20);
    const MultiIndexSet rm = reduced_margin(a);
    std::vector<double> sq(rm.size());
    for (double& v : sq) v = unif(gen) < 0.1 ? 0.0 : std::pow(unif(gen), 4);
    for (std::size_t k : select_bulk(rm, sq, unif(gen))) a.insert(rm[k]);
    if (!brute_monotone(as_set(a))) ++broken;
  }
  return {mismatches == 0 && broken == 0 && sets > 0,
          std::to_string(sets) + " monotone sets checked, " + std::to_string(mismatches) +
              " margin mismatches; " + std::to_string(broken) + " of 10000 bulk extensions non-monotone"};
}

Verdict fem_checks() {
  const StructuredTriMesh m = build_rect_mesh({0.0, 1.0, 0.0, 1.5}, 0.125);
  const SpMat a = assemble_stiffness(m, std::vector<double>(m.num_triangles(), 1.7));
  Vec exact(static_cast<Eigen::Index>(m.num_nodes()));
  std::vector<int> inner;
  for (std::size_t n = 0; n < m.num_nodes(); ++n) {
    exact[n] = 0.4 - 1.2 * m.nodes[n].x + 2.5 * m.nodes[n].y;
    if (m.node_tags[n] == NodeTag::interior) inner.push_back(static_cast<int>(n));
  }
  const DofRestriction r(a, inner);
  Vec g = exact;
  for (int n : inner) g[n] = 0.0;
  Eigen::SimplicialLDLT<SpMat> ldlt(r.restrict_matrix(a));
  const Vec sol = g + r.extend_vector(ldlt.solve(-r.restrict_vector(a * g)), m.num_nodes());
  const double patch_err = (sol - exact).lpNorm<Eigen::Infinity>();

  std::mt19937 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> rate(m.num_triangles());
  for (double& v : rate) v = 1.0 + 0.5 * u(gen);
  Vec w(static_cast<Eigen::Index>(m.num_nodes())), d(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    w[i] = u(gen);
    d[i] = u(gen);
  }
  const ReactionForm form(m, rate);
  const Vec n0 = form.apply(w, 0.8);
  const Vec jd = form.jacobian(w, 0.8) * d;
  double slope = 1e9, prev = -1.0;
  for (double eps = 0.1; eps > 0.005; eps /= 2.0) {
    const double e = (form.apply(w + eps * d, 0.8) - n0 - eps * jd).norm();
    if (prev > 0.0) slope = std::min(slope, std::log2(prev / e));
    prev = e;
  }
  return {patch_err <= 1e-10 && slope >= 1.9,
          "patch test error " + fmt("%.2e", patch_err) + " (<= 1e-10), FD slope " + fmt("%.3f", slope) +
              " (>= 1.9)"};
}

// --------------------------------------------------------------- criteria 8-12

Verdict newton_economy(const Bench& b, const IterationState& st) {
  const GlobalLocalProblem& p = *b.problem;
  const Eigen::MatrixXd xi = CounterRng(4242, 99).uniform_block(0, 100, p.stochastic_dim());
  int within = 0, worst = 0;
  for (int l = 0; l < 100; ++l) {
    const Eigen::RowVectorXd row = xi.row(l);
    const std::vector<double> pt(row.data(), row.data() + row.size());
    const PatchProblem& pb = p.patch(static_cast<std::size_t>(l) % p.num_patches());
    const Vec trace = interface_trace(pb.interface(), st.u.evaluate(pt));
    const LocalSample s = pb.solve(pt, trace, b.config.newton);
    within += s.iterations <= 5;
    worst = std::max(worst, s.iterations);
  }
  return {within >= 95, std::to_string(within) + "/100 solves with <= 5 iterations (>= 95), max " +
                            std::to_string(worst)};
}

Verdict coupled_consistency(const Bench& b, const IterationState& st) {
  const GlobalLocalProblem& p = *b.problem;
  const Eigen::MatrixXd xi = CounterRng(777, 55).uniform_block(0, 20, p.stochastic_dim());
  double worst = 0.0;
  for (int l = 0; l < 20; ++l) {
    const Eigen::RowVectorXd row = xi.row(l);
    const std::vector<double> pt(row.data(), row.data() + row.size());
    std::vector<Vec> w, lam;
    for (std::size_t q = 0; q < p.num_patches(); ++q) {
      w.push_back(st.w[q].evaluate(pt));
      lam.push_back(st.lambda[q].evaluate(pt));
    }
    worst = std::max(worst, coupled_residuals(p, pt, st.u.evaluate(pt), w, lam).max());
  }
  const double tol = 10.0 * b.config.adaptive.eps_cv;
  return {worst <= tol, "max relative residual " + fmt("%.3e", worst) + " at 20 samples (<= " + fmt("%.0e", tol) + ")"};
}

Verdict determinism(const fs::path& dir) {
  RunConfig c;
  c.adaptive.eps_cv = 1e-2;
  c.k_max = 3;
  std::string text[2];
  int factorizations[2];
  for (int r = 0; r < 2; ++r) {
    const GlobalLocalProblem problem(make_setup(c));
    const RunOutput out = run_iterations(c, problem, nullptr);
    std::ostringstream os;
    write_history_csv(os, out.state.history, problem.num_patches(), out.config_hash);
    text[r] = os.str();
    factorizations[r] = problem.factorizations();
    std::ofstream(dir / ("determinism_" + std::to_string(r + 1) + ".csv")) << text[r];
  }
  const bool same = text[0] == text[1] && !text[0].empty();
  return {same && factorizations[0] == 1 && factorizations[1] == 1,
          std::string(same ? "identical" : "different") + " history files, factorizations " +
              std::to_string(factorizations[0]) + " and " + std::to_string(factorizations[1])};
}

Verdict sparsity_localization(const IterationState& st) {
  const std::size_t nq = st.w.size();
  int lambda_ge = 0;
  std::string failures;
  for (std::size_t q = 0; q < nq; ++q) {
    const std::vector<int> deg = st.w[q].indices.max_partial_degrees();
    const int own = std::max(deg[2 * q], deg[2 * q + 1]);
    int far = 0;
    for (std::size_t p = 0; p < nq; ++p) {
      if ((p > q ? p - q : q - p) >= 2) far = std::max({far, deg[2 * p], deg[2 * p + 1]});
    }
    if (own < far) failures += " w_" + std::to_string(q + 1);
    lambda_ge += st.lambda[q].indices.size() >= st.w[q].indices.size();
  }
  return {failures.empty() && lambda_ge >= 6,
          "own-variable degree dominates far patches" + (failures.empty() ? std::string() : " except" + failures) +
              "; dim(lambda_q) >= dim(w_q) in " + std::to_string(lambda_ge) + "/8 (>= 6)"};
}

bool in_box(const Point2& p, const Box& b) {
  const double t = 1e-9;
  return p.x >= b.x_min - t && p.x <= b.x_max + t && p.y >= b.y_min - t && p.y <= b.y_max + t;
}

struct Localization {
  bool ok = true;
  double worst_outside = 0.0;  ///< outside Lambda_q and the neighbouring patches
  double worst_strip = 0.0;    ///< outside the strip those patches span, for the record only
  std::string where;
};

Localization check_localization(const GlobalLocalProblem& p, const MultiscaleStats& s) {
  Localization res;
  const std::size_t nq = p.num_patches();
  const auto& boxes = p.setup().layout.patch_boxes;
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t i : {2 * q, 2 * q + 1}) {
      double best = -1.0;
      bool best_inside = false;
      auto visit = [&](const Point2& x, double v, std::optional<std::size_t> patch) {
        const bool inside = patch ? *patch == q : in_box(x, boxes[q]);
        bool near = false;
        for (std::size_t r = (q == 0 ? 0 : q - 1); r <= std::min(nq - 1, q + 1); ++r) {
          near = near || (patch ? *patch == r : in_box(x, boxes[r]));
        }
        if (v > best) {
          best = v;
          best_inside = inside;
        }
        if (!near) res.worst_outside = std::max(res.worst_outside, v);
        const double lo = boxes[q == 0 ? 0 : q - 1].y_min, hi = boxes[std::min(nq - 1, q + 1)].y_max;
        if (x.y < lo - 1e-9 || x.y > hi + 1e-9) res.worst_strip = std::max(res.worst_strip, v);
      };
      for (std::size_t k = 0; k < s.exterior.points.size(); ++k) {
        visit(s.exterior.points[k], s.exterior_sensitivity[i][static_cast<Eigen::Index>(k)], std::nullopt);
      }
      for (std::size_t r = 0; r < nq; ++r) {
        const std::size_t end = r + 1 < nq ? s.patch_offsets[r + 1] : s.patches.points.size();
        for (std::size_t k = s.patch_offsets[r]; k < end; ++k) {
          visit(s.patches.points[k], s.patch_sensitivity[i][static_cast<Eigen::Index>(k)], r);
        }
      }
      if (!best_inside) {
        res.ok = false;
        res.where += " S_" + std::to_string(i + 1);
      }
    }
  }
  res.ok = res.ok && res.worst_outside <= 0.05;
  return res;
}

Verdict sensitivity_localization(const Bench& iso, const IterationState& st, const fs::path& dir) {
  const MultiscaleStats s = multiscale_statistics(*iso.problem, st.u, st.w);
  const Localization loc = check_localization(*iso.problem, s);

  RunConfig c = iso.config;
  c.weight_mode = WeightMode::anisotropic;
  const GlobalLocalProblem aniso(make_setup(c));
  const auto t = std::chrono::steady_clock::now();
  const RunOutput out = run_iterations(c, aniso, nullptr);
  std::printf("  run %-14s %6.1f s  k=%zu\n", "aniso", seconds_since(t), out.state.history.size());
  save_history(dir, "aniso", out, aniso.num_patches());
  const MultiscaleStats sa = multiscale_statistics(aniso, out.state.u, out.state.w);
  bool monotone = out.failure.empty();
  std::string maxima[2];
  for (int kind = 0; kind < 2; ++kind) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < aniso.num_patches(); ++q) {
      const std::size_t i = 2 * q + static_cast<std::size_t>(kind);
      const double mx = std::max(sa.exterior_sensitivity[i].maxCoeff(), sa.patch_sensitivity[i].maxCoeff());
      if (mx > 1.1 * prev) monotone = false;
      prev = mx;
      maxima[kind] += (q ? "," : "") + fmt("%.2g", mx);
    }
  }
  return {loc.ok && monotone,
          "isotropic: max inside own patch" + (loc.where.empty() ? std::string() : " except" + loc.where) +
              ", max outside own and neighbouring patches " + fmt("%.3e", loc.worst_outside) +
              " (<= 0.05; outside the strip they span " + fmt("%.3e", loc.worst_strip) + "); anisotropic maxima " +
              (monotone ? "non-increasing" : "NOT non-increasing") + " (diffusion " + maxima[0] + "; reaction " +
              maxima[1] + ")"};
}

} // namespace

int main(int argc, char** argv) {
  const fs::path dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(dir);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, Verdict>> results;
  auto record = [&](const std::string& name, const std::function<Verdict()>& f) {
    Verdict v;
    try {
      v = f();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, v);
  };

  Bench b;
  b.problem = std::make_unique<GlobalLocalProblem>(make_setup(b.config));
  {
    const auto t = std::chrono::steady_clock::now();
    b.reference = solve_reference(*b.problem, make_reference_params(b.config), b.config.newton);
    std::printf("  reference %.1f s, N_ref=%zu, dim U=%zu, converged=%d\n", seconds_since(t), b.reference.samples,
                b.reference.u.indices.size(), b.reference.converged ? 1 : 0);
  }
  run_variant(b, dir, "aitken_1e-3", [](RunConfig&) {});
  run_variant(b, dir, "aitken_1e-2", [](RunConfig& c) { c.adaptive.eps_cv = 1e-2; });
  run_variant(b, dir, "aitken_1e-4", [](RunConfig& c) { c.adaptive.eps_cv = 1e-4; });
  for (double rho : {0.2, 0.4, 0.8, 1.0, 1.8}) {
    run_variant(b, dir, "rho" + fmt("%.1f", rho), [rho](RunConfig& c) {
      c.relaxation.kind = RelaxationStrategy::Kind::fixed;
      c.relaxation.rho = rho;
      c.k_max = 10;
    });
  }
  const RunOutput& main_run = b.runs.at("aitken_1e-3");

  record("C1 benchmark reproduction", [&] { return benchmark_reproduction(main_run); });
  record("C2 eps_cv plateau law", [&] {
    return plateau_law(b.runs.at("aitken_1e-2"), main_run, b.runs.at("aitken_1e-4"));
  });
  record("C3 linear two-iteration convergence", [&] { return linear_two_iterations(dir); });
  record("C4 fixed relaxation ordering", [&] { return fixed_rho_ordering(b); });
  record("C5 leave-one-out oracle", [] { return loo_oracle(); });
  record("C6 index-set laws", [] { return index_set_laws(); });
  record("C7 FEM patch and slope tests", [] { return fem_checks(); });
  record("C8 Newton economy", [&] { return newton_economy(b, main_run.state); });
  record("C9 coupled consistency", [&] { return coupled_consistency(b, main_run.state); });
  record("C10 determinism", [&] { return determinism(dir); });
  record("C11 sparsity localization", [&] { return sparsity_localization(main_run.state); });
  record("C12 sensitivity localization", [&] { return sensitivity_localization(b, main_run.state, dir); });

  int failed = 0;
  std::ofstream summary(dir / "acceptance.txt");
  for (const auto& [name, v] : results) {
    summary << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << '\n';
    failed += !v.pass;
  }
  std::printf("%d of %zu criteria passed in %.0f s\n", static_cast<int>(results.size()) - failed, results.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
