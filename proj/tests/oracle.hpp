#pragma once

// Naive double-loop reference implementations used as independent oracles.
// These deliberately avoid the bit-vector kernels: everything goes through
// std::set and plain integer arithmetic.

#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using Elems = std::vector<std::int64_t>;

inline std::set<std::int64_t> sumset(const Elems& a) {
  std::set<std::int64_t> out;
  for (auto x : a)
    for (auto y : a) out.insert(x + y);
  return out;
}

inline std::set<std::int64_t> restricted_sumset(const Elems& a) {
  std::set<std::int64_t> out;
  for (auto x : a)
    for (auto y : a)
      if (x != y) out.insert(x + y);
  return out;
}

inline std::set<std::int64_t> difference_set(const Elems& a) {
  std::set<std::int64_t> out;
  for (auto x : a)
    for (auto y : a) out.insert(x - y);
  return out;
}

inline std::int64_t delta(const Elems& a) {
  return static_cast<std::int64_t>(difference_set(a).size()) -
         static_cast<std::int64_t>(restricted_sumset(a).size());
}

// Canonical representative computed with plain vector arithmetic: translate
// min to 0, divide by the gcd, take the lex-smaller of the result and its
// reflection.
inline Elems canonical(Elems a) {
  std::sort(a.begin(), a.end());
  if (a.size() == 1) return {0};
  const std::int64_t lo = a.front();
  for (auto& v : a) v -= lo;
  std::int64_t g = 0;
  for (auto v : a) g = std::gcd(g, v);
  for (auto& v : a) v /= g;
  Elems reflected(a.size());
  const std::int64_t d = a.back();
  for (std::size_t i = 0; i < a.size(); ++i) reflected[i] = d - a[a.size() - 1 - i];
  return std::min(a, reflected);
}

// Number of affine-equivalence classes of k-subsets of {0..n} satisfying
// pred, by the canonicalize-and-dedup method over every subset.
template <typename Pred>
std::int64_t count_classes_dedup(int k, int n, Pred pred) {
  std::set<Elems> reps;
  Elems subset(static_cast<std::size_t>(k));
  // Iterate k-combinations of {0..n}.
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i)];
    Elems rep = canonical(subset);
    if (!reps.contains(rep) && pred(rep)) reps.insert(rep);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - (k - 1 - i)) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return static_cast<std::int64_t>(reps.size());
}

}  // namespace oracle
