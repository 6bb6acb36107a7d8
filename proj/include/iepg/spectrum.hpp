#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "iepg/eigh.hpp"

namespace iepg {

/// Numerical thresholds shared by every routine. Defaults are the library's
/// pinned values; callers override individual fields when needed.
struct Tolerances {
  double eig_tol = 1e-10;    // accepted eigenvalue residual (relative to scale)
  double zero_tol = 1e-8;    // entries at or below this count as structural zeros
  double group_tol = 1e-6;   // eigenvalues closer than this belong to one group
  double rank_tol = 1e-9;    // singular values below rank_tol * sigma_max count as zero
};

/// Multiset of eigenvalues grouped into (representative, multiplicity) pairs,
/// representatives ascending.
struct Spectrum {
  std::vector<double> values;          // group representatives, ascending
  std::vector<int> multiplicities;

  int groups() const { return static_cast<int>(values.size()); }

  int total() const {
    int s = 0;
    for (int m : multiplicities) s += m;
    return s;
  }

  std::vector<int> sorted_multiplicities_desc() const {
    std::vector<int> m = multiplicities;
    std::sort(m.begin(), m.end(), std::greater<int>());
    return m;
  }

  /// Flat sorted list with every group repeated to its multiplicity.
  std::vector<double> expand() const {
    std::vector<double> out;
    for (int g = 0; g < groups(); ++g)
      out.insert(out.end(), multiplicities[g], values[g]);
    return out;
  }
};

/// Group a list of reals greedily left to right: a value within group_tol of
/// the current group's anchor (its first member) joins the group, anything
/// farther starts a new one. Representative = mean of the group.
inline Spectrum group_values(std::vector<double> vals, double group_tol) {
  std::sort(vals.begin(), vals.end());
  Spectrum s;
  std::size_t i = 0;
  while (i < vals.size()) {
    const double anchor = vals[i];
    double sum = 0.0;
    int count = 0;
    while (i < vals.size() && vals[i] - anchor <= group_tol) {
      sum += vals[i];
      ++count;
      ++i;
    }
    s.values.push_back(sum / count);
    s.multiplicities.push_back(count);
  }
  return s;
}

/// Grouped spectrum of a symmetric matrix.
inline Spectrum spectrum(const SymMatrix& a, const Tolerances& tol = {}) {
  return group_values(eigvals(a), tol.group_tol);
}

/// Largest absolute difference between two equal-size multisets of reals
/// after sorting both.
inline double multiset_distance(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiset_distance: size mismatch");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Distance from x to the nearest element of a finite set (+inf for empty).
inline double distance_to_set(double x, const std::vector<double>& set) {
  double d = std::numeric_limits<double>::infinity();
  for (double s : set) d = std::min(d, std::abs(x - s));
  return d;
}

}  // namespace iepg
