/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace patchdd {

/// alpha in N^m; comparisons are lexicographic.
using MultiIndex = std::vector<int>;

/// Ordered collection of distinct multi-indices of a fixed dimension m.
/// Insertion order is preserved and defines the column order of design matrices.
class MultiIndexSet {
public:
  explicit MultiIndexSet(std::size_t m = 0) : m_(m) {}

  /// The set {0}.
  static MultiIndexSet zero(std::size_t m);
  /// All alpha with |alpha|_1 <= degree, lexicographically sorted.
  static MultiIndexSet total_degree(std::size_t m, int degree);

  std::size_t dim() const { return m_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const MultiIndex& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<MultiIndex>& indices() const { return items_; }

  bool contains(const MultiIndex& a) const { return lookup_.count(a) != 0; }
  /// Position of a, or -1.
  long find(const MultiIndex& a) const;
  /// Returns false if a was already present. Throws ConfigError on a dimension mismatch.
  bool insert(const MultiIndex& a);

  /// beta in A and alpha <= beta imply alpha in A.
  bool is_monotone() const;
  /// Largest alpha_j over the set, per variable j.
  std::vector<int> max_partial_degrees() const;
  /// Copy with indices in lexicographic order.
  MultiIndexSet sorted() const;

  friend bool operator==(const MultiIndexSet& a, const MultiIndexSet& b) {
    return a.m_ == b.m_ && a.items_ == b.items_;
  }

private:
  std::size_t m_;
  std::vector<MultiIndex> items_;
  std::map<MultiIndex, std::size_t> lookup_;
};

/// Union keeping the order of a followed by the new indices of b.
MultiIndexSet set_union(const MultiIndexSet& a, const MultiIndexSet& b);

/// alpha not in A such that alpha - e_i is in A for some i with alpha_i > 0.
/// Sorted lexicographically. Throws ConfigError if A is not monotone.
MultiIndexSet margin(const MultiIndexSet& a);
/// alpha not in A such that alpha - e_i is in A for every i with alpha_i > 0.
MultiIndexSet reduced_margin(const MultiIndexSet& a);

/// v_alpha = max over beta in A, beta >= alpha, of values[beta].
std::vector<double> monotone_envelope(std::span<const double> values, const MultiIndexSet& a);

/// Smallest prefix of M, ordered by decreasing squared norm (ties broken by
/// lexicographic order), whose energy reaches theta times the total. Returns
/// positions into M. With all norms zero the lexicographically smallest index
/// is returned alone.
std::vector<std::size_t> select_bulk(const MultiIndexSet& m, std::span<const double> sq_norms,
                                     double theta);

} // namespace patchdd
