#pragma once

// Finite sets of (possibly negative) integers stored as an offset plus a
// dense bit vector.  IntSet values are immutable once constructed and safe
// to share across threads.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsdkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or duplicate entries in a set literal.  position is the 1-based
// token index within the literal.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position(position) {}
  std::size_t position;
};

// A set (or an operation result) would span more bit positions than the
// configured universe limit allows.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Signed 64-bit arithmetic overflowed while assembling elements.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// An operation's stated precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An internally verified identity failed.  This signals a kernel bug, not
// bad input.
class InternalCheckError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search would test more candidates than its budget.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::int64_t budget, std::int64_t required)
      : Error(what), budget(budget), required(required) {}
  std::int64_t budget;
  std::int64_t required;
};

namespace detail {
inline std::atomic<std::int64_t>& universe_limit_storage() {
  static std::atomic<std::int64_t> bits{std::int64_t{1} << 26};
  return bits;
}
}  // namespace detail

// Maximum number of bit positions a single set may span.  Exceeding it is a
// CapacityError, never silent truncation.
inline std::int64_t universe_limit() {
  return detail::universe_limit_storage().load(std::memory_order_relaxed);
}

inline void set_universe_limit(std::int64_t bits) {
  if (bits < 1) throw PreconditionError("universe limit must be positive");
  detail::universe_limit_storage().store(bits, std::memory_order_relaxed);
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

class IntSet {
 public:
  IntSet() = default;

  // Builds a set from arbitrary-order elements.  Duplicates are rejected.
  static IntSet from_elements(std::span<const std::int64_t> elements) {
    std::vector<std::int64_t> sorted(elements.begin(), elements.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i] == sorted[i - 1]) {
        throw ParseError("duplicate element " + std::to_string(sorted[i]), i + 1);
      }
    }
    return from_sorted_unique(sorted);
  }

  static IntSet of(std::initializer_list<std::int64_t> elements) {
    return from_elements(std::span<const std::int64_t>(elements.begin(), elements.size()));
  }

  // Builds a set from strictly increasing elements (not validated).
  static IntSet from_sorted_unique(std::span<const std::int64_t> sorted) {
    IntSet s;
    if (sorted.empty()) return s;
    const std::int64_t lo = sorted.front();
    const std::int64_t hi = sorted.back();
    const std::int64_t span = checked_add(checked_sub(hi, lo), 1);
    check_span(span);
    s.offset_ = lo;
    s.count_ = static_cast<std::int64_t>(sorted.size());
    s.words_.assign(static_cast<std::size_t>((span + 63) / 64), 0);
    for (std::int64_t v : sorted) {
      const std::uint64_t i = static_cast<std::uint64_t>(v - lo);
      s.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return s;
  }

  // Low-level constructor used by the set kernels: bit i of words means
  // offset + i is present.  Leading/trailing zero words are trimmed and the
  // representation is aligned so that bit 0 is the minimum element.
  static IntSet from_words(std::int64_t offset, std::vector<std::uint64_t> words) {
    std::size_t first = 0;
    while (first < words.size() && words[first] == 0) ++first;
    if (first == words.size()) return IntSet{};
    std::size_t last = words.size();
    while (words[last - 1] == 0) --last;
    if (first > 0 || last < words.size()) {
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(last), words.end());
      words.erase(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(first));
      offset = checked_add(offset, static_cast<std::int64_t>(first) * 64);
    }
    const int lead = std::countr_zero(words.front());
    if (lead > 0) {
      shift_down(words, lead);
      while (words.back() == 0) words.pop_back();
      offset = checked_add(offset, lead);
    }
    IntSet s;
    s.offset_ = offset;
    s.words_ = std::move(words);
    s.count_ = 0;
    for (std::uint64_t w : s.words_) s.count_ += std::popcount(w);
    check_span(s.span_bits());
    return s;
  }

  // Parses the shared literal format: comma-separated decimal integers with
  // optional whitespace, e.g. "0,2,3,4,7,11,12,14".
  static IntSet parse(std::string_view literal) {
    std::vector<std::int64_t> values;
    std::size_t token_index = 0;
    std::size_t begin = 0;
    bool any_token = false;
    while (begin <= literal.size()) {
      std::size_t end = literal.find(',', begin);
      if (end == std::string_view::npos) end = literal.size();
      std::string_view token = literal.substr(begin, end - begin);
      ++token_index;
      std::size_t l = 0, r = token.size();
      while (l < r && std::isspace(static_cast<unsigned char>(token[l]))) ++l;
      while (r > l && std::isspace(static_cast<unsigned char>(token[r - 1]))) --r;
      token = token.substr(l, r - l);
      if (token.empty()) {
        if (literal.find_first_not_of(" \t\r\n") == std::string_view::npos && token_index == 1 &&
            end == literal.size()) {
          return IntSet{};  // empty literal denotes the empty set
        }
        throw ParseError("empty element at position " + std::to_string(token_index), token_index);
      }
      any_token = true;
      std::int64_t value = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec == std::errc::result_out_of_range) {
        throw ParseError("element out of 64-bit range at position " + std::to_string(token_index),
                         token_index);
      }
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("malformed element '" + std::string(token) + "' at position " +
                             std::to_string(token_index),
                         token_index);
      }
      values.push_back(value);
      if (end == literal.size()) break;
      begin = end + 1;
    }
    (void)any_token;
    // Duplicate detection reports the duplicated value and its token position.
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (values[order[i]] == values[order[i - 1]]) {
        const std::size_t pos = std::max(order[i], order[i - 1]) + 1;
        throw ParseError("duplicate element " + std::to_string(values[order[i]]) +
                             " at position " + std::to_string(pos),
                         pos);
      }
    }
    return from_elements(values);
  }

  bool empty() const { return count_ == 0; }
  std::int64_t size() const { return count_; }

  std::int64_t min() const {
    require_nonempty();
    return offset_;  // representation keeps bit 0 at the minimum
  }

  std::int64_t max() const {
    require_nonempty();
    return offset_ + span_bits() - 1;
  }

  std::int64_t diameter() const {
    require_nonempty();
    return span_bits() - 1;
  }

  bool contains(std::int64_t v) const {
    if (empty() || v < offset_) return false;
    const std::int64_t i = v - offset_;
    if (i >= span_bits()) return false;
    return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1;
  }

  // Number of bit positions between min and max inclusive (0 when empty).
  std::int64_t span_bits() const {
    if (words_.empty()) return 0;
    return static_cast<std::int64_t>(words_.size() - 1) * 64 + 64 -
           std::countl_zero(words_.back());
  }

  std::int64_t offset() const { return offset_; }
  std::span<const std::uint64_t> words() const { return words_; }

  // Calls f(value) for each element in ascending order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        const int b = std::countr_zero(w);
        f(offset_ + static_cast<std::int64_t>(wi) * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::int64_t> elements() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(count_));
    for_each([&](std::int64_t v) { out.push_back(v); });
    return out;
  }

  // Canonical ascending literal, e.g. "0,2,3".
  std::string to_literal() const {
    std::string out;
    bool first = true;
    for_each([&](std::int64_t v) {
      if (!first) out.push_back(',');
      out += std::to_string(v);
      first = false;
    });
    return out;
  }

  friend bool operator==(const IntSet& a, const IntSet& b) {
    return a.count_ == b.count_ && (a.count_ == 0 || (a.offset_ == b.offset_ && a.words_ == b.words_));
  }

  // Ascending-sequence lexicographic order (total order on sets of equal size
  // used for canonical tie-breaks).
  static bool lex_less(const IntSet& a, const IntSet& b) {
    const auto ea = a.elements();
    const auto eb = b.elements();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
  }

 private:
  static void check_span(std::int64_t span) {
    if (span > universe_limit()) {
      throw CapacityError("set span of " + std::to_string(span) +
                          " bit positions exceeds the universe limit of " +
                          std::to_string(universe_limit()));
    }
  }

  void require_nonempty() const {
    if (empty()) throw PreconditionError("operation requires a nonempty set");
  }

  static void shift_down(std::vector<std::uint64_t>& words, int bits) {
    const std::size_t n = words.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      words[i] = (words[i] >> bits) | (words[i + 1] << (64 - bits));
    }
    words[n - 1] >>= bits;
  }

  std::int64_t offset_ = 0;  // value of bit 0; equals min() when nonempty
  std::int64_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rsdkit
