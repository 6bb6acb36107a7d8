#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

namespace iepg {

/// Eigenvalue multiplicities, unordered. Helpers below sort copies on demand.
using MultiplicityList = std::vector<int>;

/// All partitions of n into positive descending parts, listed in reverse
/// lexicographic order: {n}, {n-1,1}, ..., {1,...,1}. partitions_of(0) is the
/// single empty partition.
inline std::vector<MultiplicityList> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partitions_of: negative argument");
  std::vector<MultiplicityList> out;
  MultiplicityList current;
  std::function<void(int, int)> rec = [&](int left, int max_part) {
    if (left == 0) {
      out.push_back(current);
      return;
    }
    for (int first = std::min(left, max_part); first >= 1; --first) {
      current.push_back(first);
      rec(left - first, first);
      current.pop_back();
    }
  };
  rec(n, n == 0 ? 1 : n);
  return out;
}

/// a covers b: sorted descending, a has at least as many entries and
/// dominates b elementwise on b's length.
inline bool covers(MultiplicityList a, MultiplicityList b) {
  if (a.size() < b.size()) return false;
  std::sort(a.begin(), a.end(), std::greater<int>());
  std::sort(b.begin(), b.end(), std::greater<int>());
  for (std::size_t i = 0; i < b.size(); ++i)
    if (a[i] < b[i]) return false;
  return true;
}

/// A refinement of the list m assigns each element its own partition.
using Refinement = std::vector<MultiplicityList>;

inline bool is_refinement(const Refinement& r, const MultiplicityList& m) {
  if (r.size() != m.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    int sum = 0;
    for (int part : r[i]) {
      if (part < 1) return false;
      sum += part;
    }
    if (sum != m[i]) return false;
  }
  return true;
}

inline MultiplicityList flatten(const Refinement& r) {
  MultiplicityList out;
  for (const MultiplicityList& parts : r)
    out.insert(out.end(), parts.begin(), parts.end());
  return out;
}

struct RefinementEnumeration {
  std::vector<Refinement> items;
  bool truncated = false;
};

/// Refinements of m in odometer order: each element's partitions run in
/// reverse lexicographic order and the last element advances fastest. The
/// enumeration stops after cap items and reports the truncation.
inline RefinementEnumeration enumerate_refinements(const MultiplicityList& m,
                                                   int cap = 10000) {
  RefinementEnumeration out;
  std::vector<std::vector<MultiplicityList>> choices;
  choices.reserve(m.size());
  for (int v : m) choices.push_back(partitions_of(v));
  std::vector<std::size_t> idx(m.size(), 0);
  while (true) {
    if (static_cast<int>(out.items.size()) >= cap) {
      out.truncated = true;
      return out;
    }
    Refinement r;
    r.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r.push_back(choices[i][idx[i]]);
    out.items.push_back(std::move(r));
    std::size_t pos = m.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < choices[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (m.empty()) return out;  // single empty refinement
  }
}

}  // namespace iepg
