/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>

#include "patchdd/error.hpp"
#include "patchdd/multi_index.hpp"

using namespace patchdd;

namespace {

std::vector<MultiIndex> box_lattice(std::size_t m, int max) {
  std::vector<MultiIndex> out;
  MultiIndex a(m, 0);
  while (true) {
    out.push_back(a);
    std::size_t j = 0;
    while (j < m && a[j] == max) a[j++] = 0;
    if (j == m) break;
    ++a[j];
  }
  return out;
}

MultiIndex minus_unit(MultiIndex a, std::size_t i) {
  --a[i];
  return a;
}

bool brute_monotone(const std::set<MultiIndex>& a) {
  for (const auto& b : a) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] > 0 && !a.count(minus_unit(b, i))) return false;
    }
  }
  return true;
}

// Definitions checked over the box {0..max}^m, which contains every margin
// element of a set of total degree < max.
std::set<MultiIndex> brute_margin(const std::set<MultiIndex>& a, std::size_t m, int max, bool reduced) {
  std::set<MultiIndex> out;
  for (const auto& alpha : box_lattice(m, max)) {
    if (a.count(alpha)) continue;
    bool any = false, all = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (alpha[i] == 0) continue;
      const bool in = a.count(minus_unit(alpha, i)) != 0;
      any = any || in;
      all = all && in;
    }
    if (reduced ? all : any) out.insert(alpha);
  }
  return out;
}

MultiIndexSet to_set(const std::set<MultiIndex>& s, std::size_t m) {
  MultiIndexSet out(m);
  for (const auto& a : s) out.insert(a);
  return out;
}

std::set<MultiIndex> to_std(const MultiIndexSet& s) {
  return {s.indices().begin(), s.indices().end()};
}

// Every nonempty downward closed subset of the total degree <= d simplex.
std::vector<std::set<MultiIndex>> all_monotone_sets(std::size_t m, int d) {
  std::vector<MultiIndex> universe;
  for (const auto& a : box_lattice(m, d)) {
    int s = 0;
    for (int v : a) s += v;
    if (s <= d) universe.push_back(a);
  }
  REQUIRE(universe.size() <= 64);
  auto bit = [&](const MultiIndex& a) {
    return static_cast<std::uint64_t>(std::find(universe.begin(), universe.end(), a) - universe.begin());
  };
  std::set<std::uint64_t> seen = {1ULL << bit(MultiIndex(m, 0))};
  std::vector<std::uint64_t> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t mask : frontier) {
      for (std::size_t u = 0; u < universe.size(); ++u) {
        if (mask >> u & 1ULL) continue;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
          if (universe[u][i] > 0) ok = mask >> bit(minus_unit(universe[u], i)) & 1ULL;
        }
        const std::uint64_t grown = mask | 1ULL << u;
        if (ok && seen.insert(grown).second) next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::set<MultiIndex>> out;
  for (std::uint64_t mask : seen) {
    std::set<MultiIndex> s;
    for (std::size_t u = 0; u < universe.size(); ++u) {
      if (mask >> u & 1ULL) s.insert(universe[u]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace

TEST_SUITE("multi_index") {
  TEST_CASE("basic set operations") {
    MultiIndexSet a = MultiIndexSet::zero(2);
    CHECK(a.size() == 1);
    CHECK(a.insert({1, 0}));
    CHECK_FALSE(a.insert({1, 0}));
    CHECK(a.find({1, 0}) == 1);
    CHECK(a.find({0, 1}) == -1);
    CHECK_THROWS_AS(a.insert({1, 0, 0}), ConfigError);
    CHECK(MultiIndexSet::total_degree(3, 2).size() == 10);
    CHECK(MultiIndexSet::total_degree(2, 3).is_monotone());
    MultiIndexSet b(2);
    b.insert({0, 2});
    b.insert({0, 0});
    const MultiIndexSet u = set_union(a, b);
    CHECK(u.size() == 3);
    CHECK(u[0] == MultiIndex{0, 0});
    CHECK(u[2] == MultiIndex{0, 2});
    CHECK_FALSE(u.is_monotone());
    CHECK(u.max_partial_degrees() == std::vector<int>{1, 2});
  }

  TEST_CASE("margin of {0} is the unit vectors") {
    const MultiIndexSet z = MultiIndexSet::zero(3);
    CHECK(margin(z).size() == 3);
    CHECK(reduced_margin(z).size() == 3);
  }

  TEST_CASE("margins of a non-monotone set are rejected") {
    MultiIndexSet a(2);
    a.insert({0, 0});
    a.insert({2, 0});
    CHECK_THROWS_AS(margin(a), ConfigError);
    CHECK_THROWS_AS(reduced_margin(a), ConfigError);
  }

  TEST_CASE("margin and reduced margin match the definitions exhaustively") {
    std::size_t checked = 0;
    for (std::size_t m = 1; m <= 3; ++m) {
      for (const auto& s : all_monotone_sets(m, 3)) {
        const MultiIndexSet a = to_set(s, m);
        REQUIRE(a.is_monotone());
        CHECK(to_std(margin(a)) == brute_margin(s, m, 4, false));
        CHECK(to_std(reduced_margin(a)) == brute_margin(s, m, 4, true));
        const MultiIndexSet rm = reduced_margin(a);
        for (std::size_t k = 0; k < rm.size(); ++k) {
          std::set<MultiIndex> grown = s;
          grown.insert(rm[k]);
          CHECK(brute_monotone(grown));
        }
        ++checked;
      }
    }
    // 4 + 16 + 245 monotone subsets of the degree 3 simplices... at least.
    CHECK(checked > 100);
  }

  TEST_CASE("select_bulk picks the smallest energetic prefix") {
    MultiIndexSet m(1);
    for (int k = 1; k <= 4; ++k) m.insert({k});
    const std::vector<double> sq = {4.0, 1.0, 3.0, 2.0};
    auto picked = select_bulk(m, sq, 0.5);
    std::sort(picked.begin(), picked.end());
    CHECK(picked == std::vector<std::size_t>{0, 2});
    CHECK(select_bulk(m, sq, 1.0).size() == 4);
    CHECK(select_bulk(m, sq, 0.0).size() == 1);
    const std::vector<double> zeros(4, 0.0);
    CHECK(select_bulk(m, zeros, 0.5) == std::vector<std::size_t>{0});
  }

  TEST_CASE("bulk extension through the reduced margin stays monotone") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
      const std::size_t m = 1 + gen() % 5;
      MultiIndexSet a = MultiIndexSet::zero(m);
      const int grow = static_cast<int>(gen() % 12);
      for (int g = 0; g < grow; ++g) {
        const MultiIndexSet rm = reduced_margin(a);
        a.insert(rm[gen() % rm.size()]);
      }
      const MultiIndexSet rm = reduced_margin(a);
      std::vector<double> sq(rm.size());
      for (double& v : sq) v = u(gen) < 0.2 ? 0.0 : u(gen);
      const double theta = u(gen);
      MultiIndexSet next = a;
      for (std::size_t k : select_bulk(rm, sq, theta)) next.insert(rm[k]);
      REQUIRE(brute_monotone(to_std(next)));
    }
  }

  TEST_CASE("monotone envelope") {
    MultiIndexSet a(2);
    a.insert({0, 0});
    a.insert({1, 0});
    a.insert({0, 1});
    a.insert({1, 1});
    const std::vector<double> v = {0.1, 0.5, 0.2, 0.3};
    const std::vector<double> env = monotone_envelope(v, a);
    CHECK(env[0] == 0.5);
    CHECK(env[1] == 0.5);
    CHECK(env[2] == 0.3);
    CHECK(env[3] == 0.3);
  }
}
