#pragma once

// Sumset, restricted sumset and difference set on the dense representation.
// All three are computed by OR-ing shifted copies of the bit vector, one
// shift per element, which costs O(|A| * span / 64) word operations.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "rsdkit/int_set.hpp"

namespace rsdkit {

namespace detail {

// out |= in << shift, bit-granular.  out must be large enough.
inline void or_shifted(std::span<const std::uint64_t> in, std::span<std::uint64_t> out,
                       std::int64_t shift) {
  const std::size_t word_shift = static_cast<std::size_t>(shift >> 6);
  const int bit_shift = static_cast<int>(shift & 63);
  if (bit_shift == 0) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i + word_shift] |= in[i];
    return;
  }
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i + word_shift] |= (in[i] << bit_shift) | carry;
    carry = in[i] >> (64 - bit_shift);
  }
  if (carry != 0) out[in.size() + word_shift] |= carry;
}

// Bits of the reflection of `in` within [0, span_bits): bit j set iff bit
// (span_bits - 1 - j) of `in` is set.
inline std::vector<std::uint64_t> reflect_bits(std::span<const std::uint64_t> in,
                                               std::int64_t span_bits) {
  std::vector<std::uint64_t> out(in.size(), 0);
  for (std::size_t wi = 0; wi < in.size(); ++wi) {
    std::uint64_t w = in[wi];
    while (w != 0) {
      const int b = std::countr_zero(w);
      const std::int64_t j = span_bits - 1 - (static_cast<std::int64_t>(wi) * 64 + b);
      out[static_cast<std::size_t>(j >> 6)] |= std::uint64_t{1} << (j & 63);
      w &= w - 1;
    }
  }
  return out;
}

// popcount(a & (b >> shift)) for shift >= 0, or popcount(a & (b << -shift)).
inline std::int64_t popcount_and_shifted(std::span<const std::uint64_t> a,
                                         std::span<const std::uint64_t> b, std::int64_t shift) {
  const auto b_word = [&](std::int64_t wi) -> std::uint64_t {
    return (wi >= 0 && wi < static_cast<std::int64_t>(b.size())) ? b[static_cast<std::size_t>(wi)]
                                                                 : 0;
  };
  std::int64_t count = 0;
  // Bit j of the shifted b is bit (j + shift) of b.
  const std::int64_t word_shift = shift >> 6;  // arithmetic shift keeps sign
  const int bit_shift = static_cast<int>(shift - word_shift * 64);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const std::int64_t wi = static_cast<std::int64_t>(i) + word_shift;
    std::uint64_t shifted = b_word(wi) >> bit_shift;
    if (bit_shift != 0) shifted |= b_word(wi + 1) << (64 - bit_shift);
    count += std::popcount(a[i] & shifted);
  }
  return count;
}

inline std::vector<std::int64_t> set_bit_indices(std::span<const std::uint64_t> words) {
  std::vector<std::int64_t> out;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    while (w != 0) {
      out.push_back(static_cast<std::int64_t>(wi) * 64 + std::countr_zero(w));
      w &= w - 1;
    }
  }
  return out;
}

inline void check_result_span(std::int64_t span_bits) {
  if (span_bits > universe_limit()) {
    throw CapacityError("result span of " + std::to_string(span_bits) +
                        " bit positions exceeds the universe limit of " +
                        std::to_string(universe_limit()));
  }
}

}  // namespace detail

// A + A = {a + b : a, b in A}.
inline IntSet sumset(const IntSet& a) {
  if (a.empty()) return IntSet{};
  const std::int64_t diam = a.diameter();
  const std::int64_t out_bits = checked_add(checked_mul(diam, 2), 1);
  detail::check_result_span(out_bits);
  std::vector<std::uint64_t> out(static_cast<std::size_t>((out_bits + 63) / 64), 0);
  for (std::int64_t i : detail::set_bit_indices(a.words())) {
    detail::or_shifted(a.words(), out, i);
  }
  return IntSet::from_words(checked_add(a.offset(), a.offset()), std::move(out));
}

// A - A = {a - b : a, b in A}; symmetric about 0.
inline IntSet difference_set(const IntSet& a) {
  if (a.empty()) return IntSet{};
  const std::int64_t diam = a.diameter();
  const std::int64_t out_bits = checked_add(checked_mul(diam, 2), 1);
  detail::check_result_span(out_bits);
  std::vector<std::uint64_t> out(static_cast<std::size_t>((out_bits + 63) / 64), 0);
  for (std::int64_t i : detail::set_bit_indices(a.words())) {
    detail::or_shifted(a.words(), out, diam - i);
  }
  return IntSet::from_words(checked_sub(a.min(), a.max()), std::move(out));
}

// A (+) A = {a + b : a, b in A, a != b}.  Computed as the sumset with the
// doubles-only positions removed: position 2a is cleared iff the only pair
// hitting it is (a, a), i.e. popcount(A & (2a - A)) == 1.
inline IntSet restricted_sumset(const IntSet& a) {
  if (a.empty()) return IntSet{};
  const std::int64_t diam = a.diameter();
  const std::int64_t out_bits = checked_add(checked_mul(diam, 2), 1);
  detail::check_result_span(out_bits);
  std::vector<std::uint64_t> out(static_cast<std::size_t>((out_bits + 63) / 64), 0);
  const auto indices = detail::set_bit_indices(a.words());
  for (std::int64_t i : indices) detail::or_shifted(a.words(), out, i);
  const auto reflected = detail::reflect_bits(a.words(), diam + 1);
  for (std::int64_t i : indices) {
    // Bit t of A AND bit (2i - t) of A; the latter is bit (diam - 2i + t) of
    // the reflection, so shift the reflection by diam - 2i and intersect.
    const std::int64_t hits = detail::popcount_and_shifted(a.words(), reflected, diam - 2 * i);
    if (hits == 1) {
      out[static_cast<std::size_t>((2 * i) >> 6)] &= ~(std::uint64_t{1} << ((2 * i) & 63));
    }
  }
  return IntSet::from_words(checked_add(a.offset(), a.offset()), std::move(out));
}

// A + B for two sets (used by the block constructions).
inline IntSet pairwise_sum(const IntSet& a, const IntSet& b) {
  if (a.empty() || b.empty()) return IntSet{};
  if (a.size() > b.size()) return pairwise_sum(b, a);
  const std::int64_t out_bits = checked_add(checked_add(a.diameter(), b.diameter()), 1);
  detail::check_result_span(out_bits);
  std::vector<std::uint64_t> out(static_cast<std::size_t>((out_bits + 63) / 64), 0);
  for (std::int64_t i : detail::set_bit_indices(a.words())) {
    detail::or_shifted(b.words(), out, i);
  }
  return IntSet::from_words(checked_add(a.offset(), b.offset()), std::move(out));
}

// shift + scale * A.  scale may be negative (reflection); zero is an error.
inline IntSet affine_map(const IntSet& a, std::int64_t shift, std::int64_t scale) {
  if (scale == 0) throw PreconditionError("affine_map: scale must be nonzero");
  if (a.empty()) return IntSet{};
  std::vector<std::int64_t> mapped;
  mapped.reserve(static_cast<std::size_t>(a.size()));
  a.for_each([&](std::int64_t v) { mapped.push_back(checked_add(shift, checked_mul(scale, v))); });
  if (scale < 0) std::reverse(mapped.begin(), mapped.end());
  return IntSet::from_sorted_unique(mapped);
}

struct AnalysisReport {
  IntSet set;
  std::int64_t size = 0;
  std::int64_t sumset_size = 0;
  std::int64_t restricted_sumset_size = 0;
  std::int64_t difference_size = 0;
  std::int64_t delta = 0;         // |A - A| - |A (+) A|
  std::int64_t sum_diff_gap = 0;  // |A + A| - |A - A|
  bool is_sd = false;
  bool is_rsd = false;
};

inline AnalysisReport analyze(const IntSet& a) {
  if (a.empty()) throw PreconditionError("analyze: the empty set has no defined delta");
  AnalysisReport r;
  r.set = a;
  r.size = a.size();
  r.sumset_size = sumset(a).size();
  r.restricted_sumset_size = restricted_sumset(a).size();
  r.difference_size = difference_set(a).size();
  r.delta = r.difference_size - r.restricted_sumset_size;
  r.sum_diff_gap = r.sumset_size - r.difference_size;
  r.is_sd = r.sum_diff_gap > 0;
  r.is_rsd = r.delta < 0;
  return r;
}

}  // namespace rsdkit
