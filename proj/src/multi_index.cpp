/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "patchdd/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "patchdd/error.hpp"

namespace patchdd {

namespace {

void enumerate_total_degree(std::size_t m, int degree, MultiIndex& cur, std::size_t pos, int left,
                            std::vector<MultiIndex>& out) {
  if (pos == m) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= left; ++d) {
    cur[pos] = d;
    enumerate_total_degree(m, degree, cur, pos + 1, left - d, out);
  }
  cur[pos] = 0;
}

void require_monotone(const MultiIndexSet& a) {
  if (a.empty()) throw ConfigError("multi-index set must be nonempty");
  if (!a.is_monotone()) throw ConfigError("multi-index set is not monotone");
}

} // namespace

MultiIndexSet MultiIndexSet::zero(std::size_t m) {
  MultiIndexSet s(m);
  s.insert(MultiIndex(m, 0));
  return s;
}

MultiIndexSet MultiIndexSet::total_degree(std::size_t m, int degree) {
  std::vector<MultiIndex> all;
  MultiIndex cur(m, 0);
  enumerate_total_degree(m, degree, cur, 0, degree, all);
  std::sort(all.begin(), all.end());
  MultiIndexSet s(m);
  for (const auto& a : all) s.insert(a);
  return s;
}

long MultiIndexSet::find(const MultiIndex& a) const {
  const auto it = lookup_.find(a);
  return it == lookup_.end() ? -1 : static_cast<long>(it->second);
}

bool MultiIndexSet::insert(const MultiIndex& a) {
  if (a.size() != m_) throw ConfigError("multi-index has wrong dimension");
  if (std::any_of(a.begin(), a.end(), [](int v) { return v < 0; })) {
    throw ConfigError("multi-index entries must be nonnegative");
  }
  const auto [it, fresh] = lookup_.emplace(a, items_.size());
  if (fresh) items_.push_back(a);
  return fresh;
}

bool MultiIndexSet::is_monotone() const {
  // Checking the immediate predecessors alpha - e_i suffices by induction.
  MultiIndex b;
  for (const auto& a : items_) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i] == 0) continue;
      b = a;
      --b[i];
      if (!contains(b)) return false;
    }
  }
  return true;
}

std::vector<int> MultiIndexSet::max_partial_degrees() const {
  std::vector<int> d(m_, 0);
  for (const auto& a : items_) {
    for (std::size_t i = 0; i < m_; ++i) d[i] = std::max(d[i], a[i]);
  }
  return d;
}

MultiIndexSet MultiIndexSet::sorted() const {
  MultiIndexSet s(m_);
  for (const auto& [a, pos] : lookup_) s.insert(a);
  return s;
}

MultiIndexSet set_union(const MultiIndexSet& a, const MultiIndexSet& b) {
  if (a.dim() != b.dim()) throw ConfigError("multi-index sets of different dimension");
  MultiIndexSet u = a;
  for (const auto& x : b.indices()) u.insert(x);
  return u;
}

MultiIndexSet margin(const MultiIndexSet& a) {
  require_monotone(a);
  std::set<MultiIndex> cand;
  for (const auto& x : a.indices()) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      MultiIndex y = x;
      ++y[i];
      if (!a.contains(y)) cand.insert(std::move(y));
    }
  }
  MultiIndexSet out(a.dim());
  for (const auto& y : cand) out.insert(y);
  return out;
}

MultiIndexSet reduced_margin(const MultiIndexSet& a) {
  const MultiIndexSet full = margin(a);
  MultiIndexSet out(a.dim());
  MultiIndex b;
  for (const auto& y : full.indices()) {
    bool ok = true;
    for (std::size_t i = 0; i < a.dim() && ok; ++i) {
      if (y[i] == 0) continue;
      b = y;
      --b[i];
      ok = a.contains(b);
    }
    if (ok) out.insert(y);
  }
  return out;
}

std::vector<double> monotone_envelope(std::span<const double> values, const MultiIndexSet& a) {
  if (values.size() != a.size()) throw ConfigError("envelope: one value per multi-index required");
  require_monotone(a);
  std::vector<double> env(values.begin(), values.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (i == j) continue;
      bool dominates = true;
      for (std::size_t k = 0; k < a.dim() && dominates; ++k) dominates = a[j][k] >= a[i][k];
      if (dominates) env[i] = std::max(env[i], values[j]);
    }
  }
  return env;
}

std::vector<std::size_t> select_bulk(const MultiIndexSet& m, std::span<const double> sq_norms,
                                     double theta) {
  if (m.empty()) throw ConfigError("bulk selection needs a nonempty candidate set");
  if (sq_norms.size() != m.size()) throw ConfigError("bulk selection: one norm per candidate");
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0,1]");

  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sq_norms[a] != sq_norms[b]) return sq_norms[a] > sq_norms[b];
    return m[a] < m[b];
  });
  double total = 0.0;
  for (std::size_t p : order) total += sq_norms[p];
  if (!(total > 0.0)) {
    return {*std::min_element(order.begin(), order.end(),
                              [&](std::size_t a, std::size_t b) { return m[a] < m[b]; })};
  }
  std::vector<std::size_t> picked;
  if (theta >= 1.0) {
    for (std::size_t p : order) {
      if (sq_norms[p] > 0.0) picked.push_back(p);
    }
    return picked;
  }
  const double target = theta * total;
  double acc = 0.0;
  for (std::size_t p : order) {
    picked.push_back(p);
    acc += sq_norms[p];
    if (acc >= target) break;
  }
  return picked;
}

} // namespace patchdd
