#pragma once

// Affine canonical form: translate the minimum to 0, divide by the gcd of
// the gaps, and keep the lexicographically smaller of the result and its
// reflection.  Two sets are affinely equivalent iff their representatives
// are equal.

#include <cstdint>
#include <numeric>
#include <vector>

#include "rsdkit/int_set.hpp"
#include "rsdkit/set_ops.hpp"

namespace rsdkit {

struct CanonicalForm {
  IntSet representative;  // contains 0, gcd of elements 1, lex <= its reflection
  std::int64_t shift = 0;
  std::int64_t scale = 1;  // |r|, always positive
  bool reflected = false;  // true when the input is shift - scale * representative
};

// Reconstructs the original set from a canonical form.
inline IntSet apply_canonical_form(const CanonicalForm& form) {
  return affine_map(form.representative, form.shift, form.reflected ? -form.scale : form.scale);
}

inline CanonicalForm canonicalize(const IntSet& a) {
  if (a.empty()) throw PreconditionError("canonicalize: set must be nonempty");
  CanonicalForm form;
  if (a.size() == 1) {
    form.representative = IntSet::of({0});
    form.shift = a.min();
    return form;
  }
  // Set-bit indices are exactly the elements translated by -min.
  const auto translated = detail::set_bit_indices(a.words());
  std::int64_t g = 0;
  for (std::int64_t t : translated) g = std::gcd(g, t);
  const std::int64_t k = a.size();
  const std::int64_t d = translated.back() / g;
  std::vector<std::int64_t> normal(translated.size());
  for (std::size_t i = 0; i < translated.size(); ++i) normal[i] = translated[i] / g;
  bool take_reflection = false;
  for (std::int64_t i = 0; i < k; ++i) {
    const std::int64_t lhs = normal[static_cast<std::size_t>(i)];
    const std::int64_t rhs = d - normal[static_cast<std::size_t>(k - 1 - i)];
    if (lhs != rhs) {
      take_reflection = lhs > rhs;
      break;
    }
  }
  if (take_reflection) {
    for (std::size_t i = 0; i < normal.size(); ++i) {
      normal[i] = d - translated[translated.size() - 1 - i] / g;
    }
    form.shift = a.max();
  } else {
    form.shift = a.min();
  }
  form.scale = g;
  form.reflected = take_reflection;
  form.representative = IntSet::from_sorted_unique(normal);
  return form;
}

inline bool are_affinely_equivalent(const IntSet& a, const IntSet& b) {
  if (a.empty() || b.empty()) {
    throw PreconditionError("are_affinely_equivalent: sets must be nonempty");
  }
  if (a.size() != b.size()) return false;
  return canonicalize(a).representative == canonicalize(b).representative;
}

}  // namespace rsdkit
