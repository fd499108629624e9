#pragma once

// Exhaustive canonical-form enumeration.  Classes are counted by ranging
// exactly over canonical sets: 0 in A, max(A) = d for each diameter d <= n,
// gcd(A) = 1, and A lexicographically <= its reflection d - A.  Each such
// set represents one affine-equivalence class and is tested once.
//
// The search space is split into shards by the first few membership
// decisions after the forced elements {0, d}; shards are embarrassingly
// parallel and merge deterministically, so reports are identical across
// shard and thread counts.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rsdkit/int_set.hpp"
#include "rsdkit/parallel.hpp"
#include "rsdkit/set_ops.hpp"

namespace rsdkit {

enum class Predicate { ALL, SD, RSD, DELTA_EQ };

inline const char* predicate_name(Predicate p) {
  switch (p) {
    case Predicate::ALL: return "all";
    case Predicate::SD: return "sd";
    case Predicate::RSD: return "rsd";
    case Predicate::DELTA_EQ: return "delta";
  }
  return "?";
}

// Default budget in candidate sets tested; the RSDKIT_BUDGET environment
// variable overrides it (read once per process).
inline std::int64_t default_budget() {
  static const std::int64_t value = [] {
    if (const char* env = std::getenv("RSDKIT_BUDGET")) {
      char* end = nullptr;
      const long long parsed = std::strtoll(env, &end, 10);
      if (end != env && *end == '\0' && parsed > 0) return static_cast<std::int64_t>(parsed);
    }
    return std::int64_t{100'000'000};
  }();
  return value;
}

struct EnumParams {
  std::int64_t k = 1;
  std::int64_t n = 0;
  Predicate predicate = Predicate::ALL;
  std::int64_t delta_value = 0;  // used by DELTA_EQ: match delta(A) == delta_value
  bool list_witnesses = false;
  int shard_count = 1;
  int thread_count = 1;
  std::int64_t budget = default_budget();
};

struct EnumerationReport {
  EnumParams params;
  std::int64_t classes_examined = 0;  // canonical sets tested
  std::int64_t matching_classes = 0;
  std::vector<IntSet> witnesses;
  double elapsed = 0.0;  // seconds
  std::vector<std::int64_t> per_shard_counts;
};

namespace detail {

inline std::uint64_t reverse_bits64(std::uint64_t x) {
  x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
  x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
  x = ((x >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((x & 0x0f0f0f0f0f0f0f0fULL) << 4);
  return __builtin_bswap64(x);
}

// min(C(n, r), cap); exact while below the cap.
inline std::int64_t binomial_capped(std::int64_t n, std::int64_t r, std::int64_t cap) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 result = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    result = result * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
    if (result >= static_cast<unsigned __int128>(cap)) return cap;
  }
  return static_cast<std::int64_t>(result);
}

// Scratch buffers for candidates whose diameter exceeds the one-word path.
struct WideScratch {
  std::vector<std::uint64_t> set, reflected, acc, dif;

  void prepare(std::int64_t d) {
    set.assign(static_cast<std::size_t>(d / 64 + 1), 0);
    reflected.assign(set.size(), 0);
    acc.assign(static_cast<std::size_t>(2 * d / 64 + 1), 0);
    dif.assign(set.size(), 0);
  }
};

// out |= in >> shift (bit-granular, bits below zero dropped).
inline void or_shifted_right(std::span<const std::uint64_t> in, std::span<std::uint64_t> out,
                             std::int64_t shift) {
  const std::size_t word_shift = static_cast<std::size_t>(shift >> 6);
  const int bit_shift = static_cast<int>(shift & 63);
  for (std::size_t i = word_shift; i < in.size(); ++i) {
    if (bit_shift == 0) {
      out[i - word_shift] |= in[i];
    } else {
      std::uint64_t w = in[i] >> bit_shift;
      if (i + 1 < in.size()) w |= in[i + 1] << (64 - bit_shift);
      out[i - word_shift] |= w;
    }
  }
}

// Decides whether one canonical candidate matches the predicate.  positions
// must be strictly increasing with positions[0] == 0 and positions[k-1] == d.
class CandidateJudge {
 public:
  CandidateJudge(Predicate predicate, std::int64_t delta_value)
      : predicate_(predicate), delta_value_(delta_value) {}

  bool matches(const std::int32_t* pos, int k, std::int64_t d) {
    if (predicate_ == Predicate::ALL) return true;
    return d <= 62 ? matches_small(pos, k, static_cast<int>(d)) : matches_wide(pos, k, d);
  }

 private:
  // One-word kernel: the set fits a u64, sums fit a u128.
  bool matches_small(const std::int32_t* pos, int k, int d) {
    std::uint64_t w = 0;
    for (int j = 0; j < k; ++j) w |= std::uint64_t{1} << pos[j];
    unsigned __int128 acc = 0;
    std::uint64_t dif = 0;
    for (int j = 0; j < k; ++j) {
      acc |= static_cast<unsigned __int128>(w) << pos[j];
      dif |= w >> pos[j];
    }
    const std::int64_t diff_size = 2 * std::popcount(dif) - 1;
    if (predicate_ == Predicate::SD) {
      const std::int64_t sum_size =
          std::popcount(static_cast<std::uint64_t>(acc)) +
          std::popcount(static_cast<std::uint64_t>(acc >> 64));
      return sum_size > diff_size;
    }
    // Restricted sumset: drop doubles 2a reachable only by the pair (a, a).
    const std::uint64_t rev = reverse_bits64(w) >> (63 - d);
    for (int j = 0; j < k; ++j) {
      const int s = d - 2 * pos[j];
      const std::uint64_t overlap = s >= 0 ? (w & (rev >> s)) : (w & (rev << -s));
      if ((overlap & (overlap - 1)) == 0) {
        acc &= ~(static_cast<unsigned __int128>(1) << (2 * pos[j]));
      }
    }
    const std::int64_t restricted_size = std::popcount(static_cast<std::uint64_t>(acc)) +
                                         std::popcount(static_cast<std::uint64_t>(acc >> 64));
    if (predicate_ == Predicate::RSD) return restricted_size > diff_size;
    return diff_size - restricted_size == delta_value_;
  }

  bool matches_wide(const std::int32_t* pos, int k, std::int64_t d) {
    scratch_.prepare(d);
    auto& set = scratch_.set;
    for (int j = 0; j < k; ++j) {
      set[static_cast<std::size_t>(pos[j] >> 6)] |= std::uint64_t{1} << (pos[j] & 63);
    }
    for (int j = 0; j < k; ++j) {
      or_shifted(set, scratch_.acc, pos[j]);
      or_shifted_right(set, scratch_.dif, pos[j]);
    }
    std::int64_t nonneg = 0;
    for (std::uint64_t w : scratch_.dif) nonneg += std::popcount(w);
    const std::int64_t diff_size = 2 * nonneg - 1;
    if (predicate_ == Predicate::SD) {
      std::int64_t sum_size = 0;
      for (std::uint64_t w : scratch_.acc) sum_size += std::popcount(w);
      return sum_size > diff_size;
    }
    auto& reflected = scratch_.reflected;
    for (int j = 0; j < k; ++j) {
      const std::int64_t r = d - pos[j];
      reflected[static_cast<std::size_t>(r >> 6)] |= std::uint64_t{1} << (r & 63);
    }
    for (int j = 0; j < k; ++j) {
      if (popcount_and_shifted(set, reflected, d - 2 * pos[j]) == 1) {
        const std::int64_t bit = 2 * static_cast<std::int64_t>(pos[j]);
        scratch_.acc[static_cast<std::size_t>(bit >> 6)] &= ~(std::uint64_t{1} << (bit & 63));
      }
    }
    std::int64_t restricted_size = 0;
    for (std::uint64_t w : scratch_.acc) restricted_size += std::popcount(w);
    if (predicate_ == Predicate::RSD) return restricted_size > diff_size;
    return diff_size - restricted_size == delta_value_;
  }

  Predicate predicate_;
  std::int64_t delta_value_;
  WideScratch scratch_;
};

struct EnumItem {
  std::int64_t d = 0;
  std::uint32_t prefix = 0;   // bit j set => position j+1 is a member
  int prefix_len = 0;         // number of forced membership decisions
  std::int64_t planned = 0;   // raw candidates in this item
  int shard = 0;
};

struct ItemResult {
  std::int64_t examined = 0;
  std::int64_t matched = 0;
  std::vector<IntSet> witnesses;
  std::vector<std::int32_t> first_match;  // search mode: first matching candidate
};

enum class EnumMode { Count, Search };

// Enumerates all completions of one work item in lexicographic order,
// applying the canonical filters (gcd 1, lex <= reflection) and the
// predicate.  In Search mode stops at the first match; stop_before aborts
// items that can no longer supply the earliest match.
inline void process_item(std::int64_t k64, const EnumItem& item, EnumMode mode,
                         Predicate predicate, std::int64_t delta_value, bool collect_witnesses,
                         ItemResult& out, std::int64_t item_ordinal,
                         std::atomic<std::int64_t>* stop_before) {
  const int k = static_cast<int>(k64);
  CandidateJudge judge(predicate, delta_value);
  const std::int64_t d = item.d;
  if (k == 1) {
    std::int32_t pos0 = 0;
    out.examined = 1;
    if (judge.matches(&pos0, 1, 0)) {
      out.matched = 1;
      const std::vector<std::int64_t> zero{0};
      if (collect_witnesses) out.witnesses.push_back(IntSet::from_sorted_unique(zero));
      if (mode == EnumMode::Search) out.first_match = {0};
    }
    return;
  }

  std::vector<std::int32_t> pos(static_cast<std::size_t>(k));
  pos[0] = 0;
  pos[static_cast<std::size_t>(k - 1)] = static_cast<std::int32_t>(d);
  int fixed = 1;
  std::int64_t gcd_fixed = d;
  for (int j = 0; j < item.prefix_len; ++j) {
    if (item.prefix & (1u << j)) {
      pos[static_cast<std::size_t>(fixed++)] = static_cast<std::int32_t>(j + 1);
      gcd_fixed = std::gcd(gcd_fixed, static_cast<std::int64_t>(j + 1));
    }
  }
  const int slots = k - 1 - fixed;  // free combination slots
  if (slots < 0) return;
  const std::int32_t lo = static_cast<std::int32_t>(item.prefix_len + 1);
  const std::int32_t hi = static_cast<std::int32_t>(d - 1);
  if (slots > hi - lo + 1) return;

  // Initialize the combination to the lexicographically first choice.
  for (int j = 0; j < slots; ++j) pos[static_cast<std::size_t>(fixed + j)] = lo + j;

  std::int64_t examined = 0, matched = 0;
  std::int64_t since_poll = 0;
  while (true) {
    if (stop_before != nullptr && ++since_poll >= 512) {
      since_poll = 0;
      if (stop_before->load(std::memory_order_relaxed) < item_ordinal) break;
    }
    // gcd filter
    std::int64_t g = gcd_fixed;
    for (int j = 0; j < slots && g != 1; ++j) {
      g = std::gcd(g, static_cast<std::int64_t>(pos[static_cast<std::size_t>(fixed + j)]));
    }
    if (g == 1) {
      // lex-vs-reflection filter: keep A iff A <= d - A as sequences
      bool keep = true;
      for (int j = 1; j < k; ++j) {
        const std::int32_t lhs = pos[static_cast<std::size_t>(j)];
        const std::int32_t rhs =
            static_cast<std::int32_t>(d) - pos[static_cast<std::size_t>(k - 1 - j)];
        if (lhs != rhs) {
          keep = lhs < rhs;
          break;
        }
      }
      if (keep) {
        ++examined;
        if (judge.matches(pos.data(), k, d)) {
          ++matched;
          if (collect_witnesses) {
            const std::vector<std::int64_t> elems(pos.begin(), pos.end());
            out.witnesses.push_back(IntSet::from_sorted_unique(elems));
          }
          if (mode == EnumMode::Search) {
            out.first_match.assign(pos.begin(), pos.end());
            break;
          }
        }
      }
    }
    // next combination (lexicographic)
    int j = slots - 1;
    while (j >= 0 &&
           pos[static_cast<std::size_t>(fixed + j)] == hi - static_cast<std::int32_t>(slots - 1 - j)) {
      --j;
    }
    if (j < 0) break;
    ++pos[static_cast<std::size_t>(fixed + j)];
    for (int m = j + 1; m < slots; ++m) {
      pos[static_cast<std::size_t>(fixed + m)] = pos[static_cast<std::size_t>(fixed + m - 1)] + 1;
    }
  }
  out.examined = examined;
  out.matched = matched;
}

// Builds the work items of one diameter in deterministic visit order (the
// include-first decision order, which concatenates to global lexicographic
// order regardless of the shard count).
inline std::vector<EnumItem> build_items(std::int64_t k, std::int64_t d, int shard_count,
                                         std::int64_t budget_cap) {
  std::vector<EnumItem> items;
  if (k == 1) {
    if (d == 0) items.push_back({0, 0, 0, 1, 0});
    return items;
  }
  if (d < k - 1 || d < 1) return items;
  const int bits = shard_count <= 1 ? 0 : std::bit_width(static_cast<unsigned>(shard_count - 1));
  const int prefix_len = static_cast<int>(std::min<std::int64_t>(bits, d - 1));
  for (std::uint32_t v = (1u << prefix_len); v-- > 0;) {
    const std::uint32_t prefix =
        prefix_len == 0
            ? 0
            : static_cast<std::uint32_t>(reverse_bits64(v) >> (64 - prefix_len));
    const int pc = std::popcount(prefix);
    const std::int64_t planned =
        binomial_capped(d - 1 - prefix_len, k - 2 - pc, budget_cap);
    if (planned == 0) continue;
    EnumItem item;
    item.d = d;
    item.prefix = prefix;
    item.prefix_len = prefix_len;
    item.planned = planned;
    item.shard = static_cast<int>(prefix % static_cast<std::uint32_t>(shard_count));
    items.push_back(item);
  }
  return items;
}

}  // namespace detail

// Counts affine-equivalence classes with a member inside {0..n} that satisfy
// the predicate.  witness_sink, when provided, receives every matching
// canonical set in deterministic order (diameter-major, then lexicographic)
// whether or not witnesses are also collected in the report.
inline EnumerationReport count_classes(
    const EnumParams& params, const std::function<void(const IntSet&)>& witness_sink = {}) {
  if (params.k < 1) throw PreconditionError("count_classes: k must be >= 1");
  if (params.n < params.k - 1) throw PreconditionError("count_classes: n must be >= k - 1");
  if (params.shard_count < 1) throw PreconditionError("count_classes: shard_count must be >= 1");
  if (params.thread_count < 1) throw PreconditionError("count_classes: thread_count must be >= 1");
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 2;
  const std::int64_t planned_total =
      params.k == 1 ? 1 : detail::binomial_capped(params.n, params.k - 1, cap);
  if (planned_total > params.budget) {
    throw BudgetError("enumeration cost of " + std::to_string(planned_total) +
                          " candidates exceeds the budget of " + std::to_string(params.budget) +
                          " (raise --budget or RSDKIT_BUDGET)",
                      params.budget, planned_total);
  }
  const auto start = std::chrono::steady_clock::now();
  EnumerationReport report;
  report.params = params;
  report.per_shard_counts.assign(static_cast<std::size_t>(params.shard_count), 0);
  const bool collect = params.list_witnesses || static_cast<bool>(witness_sink);
  const std::int64_t d_last = params.k == 1 ? 0 : params.n;
  for (std::int64_t d = (params.k == 1 ? 0 : params.k - 1); d <= d_last; ++d) {
    auto items = detail::build_items(params.k, d, params.shard_count, cap);
    if (items.empty()) continue;
    std::vector<detail::ItemResult> results(items.size());
    detail::parallel_for(
        static_cast<std::int64_t>(items.size()), params.thread_count, [&](std::int64_t i) {
          detail::process_item(params.k, items[static_cast<std::size_t>(i)], detail::EnumMode::Count,
                               params.predicate, params.delta_value, collect,
                               results[static_cast<std::size_t>(i)], i, nullptr);
        });
    for (std::size_t i = 0; i < items.size(); ++i) {
      report.classes_examined += results[i].examined;
      report.matching_classes += results[i].matched;
      report.per_shard_counts[static_cast<std::size_t>(items[i].shard)] += results[i].matched;
      for (auto& w : results[i].witnesses) {
        if (witness_sink) witness_sink(w);
        if (params.list_witnesses) report.witnesses.push_back(std::move(w));
      }
    }
  }
  report.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

struct SearchOptions {
  int thread_count = 1;
  std::int64_t budget = default_budget();
};

// First canonical set (ordered by diameter, then cardinality, then
// lexicographic) whose delta equals -x, or nullopt when the bounded space is
// exhausted.  Throws BudgetError when the next block would exceed the budget.
inline std::optional<IntSet> search_delta(std::int64_t x, std::int64_t max_diameter,
                                          std::int64_t max_k, const SearchOptions& options = {}) {
  if (max_diameter < 0 || max_k < 1) {
    throw PreconditionError("search_delta: bounds must be positive");
  }
  const std::int64_t target_delta = -x;
  std::int64_t tested = 0;
  for (std::int64_t d = 0; d <= max_diameter; ++d) {
    for (std::int64_t k = 1; k <= max_k; ++k) {
      const std::int64_t planned =
          k == 1 ? (d == 0 ? 1 : 0)
                 : detail::binomial_capped(d - 1, k - 2,
                                           std::numeric_limits<std::int64_t>::max() / 2);
      if (planned == 0) continue;
      if (tested + planned > options.budget) {
        throw BudgetError("search_delta budget: tested " + std::to_string(tested) +
                              " candidates; the block at diameter " + std::to_string(d) +
                              ", cardinality " + std::to_string(k) + " needs " +
                              std::to_string(planned) +
                              " more (raise --budget or RSDKIT_BUDGET)",
                          options.budget, tested + planned);
      }
      auto items = detail::build_items(k, d, 64, std::numeric_limits<std::int64_t>::max() / 2);
      std::vector<detail::ItemResult> results(items.size());
      std::atomic<std::int64_t> best_item{std::numeric_limits<std::int64_t>::max()};
      detail::parallel_for(
          static_cast<std::int64_t>(items.size()), options.thread_count, [&](std::int64_t i) {
            if (best_item.load(std::memory_order_relaxed) < i) return;
            detail::process_item(k, items[static_cast<std::size_t>(i)], detail::EnumMode::Search,
                                 Predicate::DELTA_EQ, target_delta, false,
                                 results[static_cast<std::size_t>(i)], i, &best_item);
            if (!results[static_cast<std::size_t>(i)].first_match.empty()) {
              std::int64_t expected = best_item.load(std::memory_order_relaxed);
              while (i < expected &&
                     !best_item.compare_exchange_weak(expected, i, std::memory_order_relaxed)) {
              }
            }
          });
      tested += planned;
      for (const auto& result : results) {
        if (!result.first_match.empty()) {
          std::vector<std::int64_t> elems(result.first_match.begin(), result.first_match.end());
          auto found = IntSet::from_sorted_unique(elems);
          const auto check = analyze(found);
          if (check.delta != target_delta) {
            throw InternalCheckError("search_delta: witness re-verification failed");
          }
          return found;
        }
      }
    }
  }
  return std::nullopt;
}

struct ProfileEntry {
  int threads = 1;
  double elapsed = 0.0;
  double tested_per_second = 0.0;
  std::int64_t matching_classes = 0;
};

struct ThroughputReport {
  std::vector<ProfileEntry> entries;
  bool consistent = true;  // identical counts across all thread counts
  std::int64_t candidates_planned = 0;
};

// Runs the same enumeration at thread counts {1, 2, max} and reports the
// throughput scaling; counts must agree across runs.
inline ThroughputReport profile_enumeration(EnumParams params) {
  ThroughputReport report;
  params.list_witnesses = false;
  const int max_threads = std::max<int>(
      {1, params.thread_count, static_cast<int>(std::thread::hardware_concurrency())});
  std::vector<int> thread_counts{1, 2, max_threads};
  thread_counts.erase(std::unique(thread_counts.begin(), thread_counts.end()),
                      thread_counts.end());
  if (thread_counts.size() > 1 && thread_counts[1] > max_threads) thread_counts.resize(1);
  report.candidates_planned =
      params.k == 1 ? 1
                    : detail::binomial_capped(params.n, params.k - 1,
                                              std::numeric_limits<std::int64_t>::max() / 2);
  std::optional<std::int64_t> baseline;
  for (int threads : thread_counts) {
    EnumParams run = params;
    run.thread_count = threads;
    const auto result = count_classes(run);
    ProfileEntry entry;
    entry.threads = threads;
    entry.elapsed = result.elapsed;
    entry.tested_per_second =
        result.elapsed > 0 ? static_cast<double>(report.candidates_planned) / result.elapsed : 0.0;
    entry.matching_classes = result.matching_classes;
    report.entries.push_back(entry);
    if (!baseline) baseline = result.matching_classes;
    if (*baseline != result.matching_classes) report.consistent = false;
  }
  return report;
}

}  // namespace rsdkit
