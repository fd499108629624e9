#pragma once

// Randomized plus fixed-instance verification of the library's count
// identities.  Trials are deterministic functions of (seed, trial index), so
// fanning them across worker threads cannot change any report field; results
// merge by logical AND with the lowest-index counterexample kept.

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "rsdkit/construct.hpp"
#include "rsdkit/parallel.hpp"
#include "rsdkit/set_ops.hpp"

namespace rsdkit {

enum class LemmaId { Lemma1, Lemma3, APIdentity, Theorem2 };

inline const char* lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::Lemma1: return "lemma1";
    case LemmaId::Lemma3: return "lemma3";
    case LemmaId::APIdentity: return "ap";
    case LemmaId::Theorem2: return "theorem2";
  }
  return "?";
}

struct Counterexample {
  std::int64_t instance = 0;
  std::string description;
};

// Weak-hypothesis sampling for the extension identity: b is drawn from
// (a_{k-2} + a_{k-1}, 2*max(A)], which satisfies the restricted-sum shift
// but not always the difference shift.
struct Lemma1Diagnostic {
  std::int64_t trials = 0;
  std::int64_t difference_claim_failures = 0;
  std::int64_t restricted_claim_failures = 0;
  double difference_claim_failure_rate = 0.0;
};

// The tiled-block family with the block counts printed in the source
// write-up: claimed vs directly computed sizes, reported verbatim.
struct Theorem2PaperCheck {
  std::int64_t k = 0;
  std::int64_t claimed_restricted = 0;
  std::int64_t computed_restricted = 0;
  std::int64_t claimed_difference = 0;
  std::int64_t computed_difference = 0;
};

struct VerificationReport {
  LemmaId lemma = LemmaId::Lemma1;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::int64_t instances_checked = 0;
  std::int64_t failures = 0;
  std::optional<Counterexample> first_counterexample;
  std::optional<Lemma1Diagnostic> lemma1_diagnostic;
  std::vector<Theorem2PaperCheck> theorem2_paper_checks;
  bool passed = false;
};

struct VerifyOptions {
  int thread_count = 1;
  bool lemma1_weak_hypothesis_diagnostic = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::int64_t instance) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(instance))));
}

// Random set with min 0 and k-1 further elements in [1, hi].
inline IntSet random_zero_based_set(std::mt19937_64& rng, int k, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> value(1, hi);
  std::vector<std::int64_t> elems{0};
  while (static_cast<int>(elems.size()) < k) {
    const std::int64_t v = value(rng);
    if (std::find(elems.begin(), elems.end(), v) == elems.end()) elems.push_back(v);
  }
  std::sort(elems.begin(), elems.end());
  return IntSet::from_sorted_unique(elems);
}

inline std::string extension_failure(const IntSet& a, std::int64_t b,
                                     const AnalysisReport& before, const AnalysisReport& after) {
  return "A={" + a.to_literal() + "} b=" + std::to_string(b) + ": restricted " +
         std::to_string(before.restricted_sumset_size) + "->" +
         std::to_string(after.restricted_sumset_size) + ", difference " +
         std::to_string(before.difference_size) + "->" + std::to_string(after.difference_size) +
         ", delta " + std::to_string(before.delta) + "->" + std::to_string(after.delta);
}

}  // namespace detail

inline VerificationReport verify_lemma(LemmaId lemma, std::int64_t trials, std::uint64_t seed,
                                       const VerifyOptions& options = {}) {
  if (trials < 1) throw PreconditionError("verify_lemma: trials must be >= 1");
  VerificationReport report;
  report.lemma = lemma;
  report.trials = trials;
  report.seed = seed;

  // Each instance returns nullopt on success or a counterexample description.
  std::function<std::optional<std::string>(std::int64_t)> instance;
  std::int64_t instance_count = trials;

  std::atomic<std::int64_t> weak_trials{0};
  std::atomic<std::int64_t> weak_difference_failures{0};
  std::atomic<std::int64_t> weak_restricted_failures{0};

  switch (lemma) {
    case LemmaId::Lemma1: {
      // Fixed regressions first, then random draws with b > 2*max(A).
      const std::vector<std::pair<IntSet, std::int64_t>> fixed = {
          {IntSet::of({0, 1, 3}), 7},
          {IntSet::parse("0,2,3,4,7,11,12,14"), 29},
          {IntSet::of({0, 1, 2, 3, 4}), 11},
      };
      instance_count = static_cast<std::int64_t>(fixed.size()) + trials;
      instance = [fixed, seed, &options, &weak_trials, &weak_difference_failures,
                  &weak_restricted_failures](std::int64_t i) -> std::optional<std::string> {
        auto rng = detail::trial_rng(seed, i);
        IntSet a;
        std::int64_t b = 0;
        if (i < static_cast<std::int64_t>(fixed.size())) {
          a = fixed[static_cast<std::size_t>(i)].first;
          b = fixed[static_cast<std::size_t>(i)].second;
        } else {
          std::uniform_int_distribution<int> kdist(3, 10);
          std::uniform_int_distribution<std::int64_t> slack(1, 32);
          a = detail::random_zero_based_set(rng, kdist(rng), 80);
          b = 2 * a.max() + slack(rng);
        }
        const auto before = analyze(a);
        const std::int64_t k = a.size();
        auto elems = a.elements();
        elems.push_back(b);
        const auto after = analyze(IntSet::from_sorted_unique(elems));
        const bool ok = after.restricted_sumset_size == before.restricted_sumset_size + k &&
                        after.difference_size == before.difference_size + 2 * k &&
                        after.delta == before.delta + k;
        if (!ok) return detail::extension_failure(a, b, before, after);
        try {
          if (extend(a, b, &before).size() != k + 1) return "extend returned a wrong-size set";
        } catch (const Error& e) {
          return std::string("extend rejected a valid pair: ") + e.what();
        }
        if (options.lemma1_weak_hypothesis_diagnostic) {
          const auto sorted = a.elements();
          const std::int64_t weak_low = sorted[static_cast<std::size_t>(k - 2)] +
                                        sorted[static_cast<std::size_t>(k - 1)];
          std::uniform_int_distribution<std::int64_t> weak_b(weak_low + 1, 2 * a.max());
          const std::int64_t bw = weak_b(rng);
          auto weak_elems = a.elements();
          weak_elems.push_back(bw);
          const auto weak_after = analyze(IntSet::from_elements(weak_elems));
          weak_trials.fetch_add(1, std::memory_order_relaxed);
          if (weak_after.difference_size != before.difference_size + 2 * k) {
            weak_difference_failures.fetch_add(1, std::memory_order_relaxed);
          }
          if (weak_after.restricted_sumset_size != before.restricted_sumset_size + k) {
            weak_restricted_failures.fetch_add(1, std::memory_order_relaxed);
          }
        }
        return std::nullopt;
      };
      break;
    }
    case LemmaId::Lemma3: {
      const std::vector<std::tuple<IntSet, std::int64_t, std::int64_t>> fixed = {
          {IntSet::of({0, 1}), 3, 2},
          {IntSet::of({0, 2, 3}), 7, 2},
          {IntSet::of({0, 1, 3, 4}), 9, 3},
      };
      instance_count = static_cast<std::int64_t>(fixed.size()) + trials;
      instance = [fixed, seed](std::int64_t i) -> std::optional<std::string> {
        auto rng = detail::trial_rng(seed, i);
        BasePowerParams params;
        if (i < static_cast<std::int64_t>(fixed.size())) {
          const auto& [set, m, n] = fixed[static_cast<std::size_t>(i)];
          params.digit_set = set;
          params.base = m;
          params.digits = n;
        } else {
          std::uniform_int_distribution<int> kdist(2, 5);
          std::uniform_int_distribution<std::int64_t> mdist(1, 3), ndist(1, 3);
          params.digit_set = detail::random_zero_based_set(rng, kdist(rng), 8);
          params.base = 2 * params.a_star() + mdist(rng);
          params.digits = ndist(rng);
        }
        const auto b = base_power(params);
        const auto ra = analyze(params.digit_set);
        const auto rb = analyze(b);
        std::int64_t size_pow = 1, diff_pow = 1, restricted_pow = 1;
        for (std::int64_t j = 0; j < params.digits; ++j) {
          size_pow *= ra.size;
          diff_pow *= ra.difference_size;
          restricted_pow *= ra.restricted_sumset_size;
        }
        const std::string tag = "A={" + params.digit_set.to_literal() +
                                "} m=" + std::to_string(params.base) +
                                " n=" + std::to_string(params.digits);
        if (rb.size != size_pow) {
          return tag + ": |B| = " + std::to_string(rb.size) + " != " + std::to_string(size_pow);
        }
        if (rb.difference_size != diff_pow) {
          return tag + ": |B-B| = " + std::to_string(rb.difference_size) +
                 " != " + std::to_string(diff_pow);
        }
        if (rb.restricted_sumset_size < restricted_pow) {
          return tag + ": |B(+)B| = " + std::to_string(rb.restricted_sumset_size) + " < " +
                 std::to_string(restricted_pow);
        }
        // Digit-structure check at desk scale: B - B must equal the set of
        // digit strings over A - A.
        std::int64_t top = params.a_star();
        for (std::int64_t j = 1; j < params.digits; ++j) top = checked_mul(top, params.base);
        if (top <= 100000) {
          const auto d = difference_set(params.digit_set);
          IntSet predicted = d;
          std::int64_t scale = params.base;
          for (std::int64_t j = 1; j < params.digits; ++j) {
            predicted = pairwise_sum(predicted, affine_map(d, 0, scale));
            scale = checked_mul(scale, params.base);
          }
          if (!(predicted == difference_set(b))) {
            return tag + ": B-B differs from the digit-wise prediction";
          }
        }
        return std::nullopt;
      };
      break;
    }
    case LemmaId::APIdentity: {
      instance_count = 2 + trials;
      instance = [seed](std::int64_t i) -> std::optional<std::string> {
        auto rng = detail::trial_rng(seed, i);
        std::int64_t k = 0, start = 0, step = 1;
        if (i == 0) {
          k = 2;
        } else if (i == 1) {
          k = 5;
        } else {
          std::uniform_int_distribution<std::int64_t> kdist(2, 200), sdist(-1000, 1000),
              stepdist(1, 50);
          k = kdist(rng);
          start = sdist(rng);
          step = stepdist(rng);
        }
        const auto r = analyze(arithmetic_progression(k, start, step));
        if (r.restricted_sumset_size != 2 * k - 3 || r.difference_size != 2 * k - 1 || r.is_rsd) {
          return "P(k=" + std::to_string(k) + ",start=" + std::to_string(start) +
                 ",step=" + std::to_string(step) + "): restricted " +
                 std::to_string(r.restricted_sumset_size) + ", difference " +
                 std::to_string(r.difference_size);
        }
        return std::nullopt;
      };
      break;
    }
    case LemmaId::Theorem2: {
      // Fixed sweep over [-50, 50] minus the search-backed residuals, plus
      // `trials` random draws from [-300, 300].
      std::vector<std::int64_t> sweep;
      for (std::int64_t x = -50; x <= 50; ++x) {
        if (!delta_set_needs_search(x)) sweep.push_back(x);
      }
      instance_count = static_cast<std::int64_t>(sweep.size()) + trials;
      instance = [sweep, seed](std::int64_t i) -> std::optional<std::string> {
        auto rng = detail::trial_rng(seed, i);
        std::int64_t x = 0;
        if (i < static_cast<std::int64_t>(sweep.size())) {
          x = sweep[static_cast<std::size_t>(i)];
        } else {
          std::uniform_int_distribution<std::int64_t> xdist(-300, 300);
          do {
            x = xdist(rng);
          } while (delta_set_needs_search(x));
        }
        const auto result = delta_set(x);
        const auto r = analyze(result.set);
        if (r.delta != -x) {
          return "x=" + std::to_string(x) + ": delta = " + std::to_string(r.delta);
        }
        if (!(replay(result.recipe) == result.set)) {
          return "x=" + std::to_string(x) + ": recipe replay mismatch";
        }
        return std::nullopt;
      };
      break;
    }
  }

  std::vector<std::optional<std::string>> outcomes(static_cast<std::size_t>(instance_count));
  detail::parallel_for(instance_count, options.thread_count, [&](std::int64_t i) {
    try {
      outcomes[static_cast<std::size_t>(i)] = instance(i);
    } catch (const std::exception& e) {
      outcomes[static_cast<std::size_t>(i)] = std::string("exception: ") + e.what();
    }
  });

  report.instances_checked = instance_count;
  for (std::int64_t i = 0; i < instance_count; ++i) {
    if (outcomes[static_cast<std::size_t>(i)].has_value()) {
      ++report.failures;
      if (!report.first_counterexample.has_value()) {
        report.first_counterexample = Counterexample{i, *outcomes[static_cast<std::size_t>(i)]};
      }
    }
  }
  report.passed = report.failures == 0;

  if (lemma == LemmaId::Lemma1 && options.lemma1_weak_hypothesis_diagnostic) {
    Lemma1Diagnostic diag;
    diag.trials = weak_trials.load();
    diag.difference_claim_failures = weak_difference_failures.load();
    diag.restricted_claim_failures = weak_restricted_failures.load();
    diag.difference_claim_failure_rate =
        diag.trials > 0 ? static_cast<double>(diag.difference_claim_failures) /
                              static_cast<double>(diag.trials)
                        : 0.0;
    report.lemma1_diagnostic = diag;
  }

  if (lemma == LemmaId::Theorem2) {
    // Claimed size identities of the block family at the block counts used
    // in the source write-up (t = k + 4), reported verbatim next to the
    // directly computed values.
    for (std::int64_t k = 0; k <= 3; ++k) {
      const auto a = detail::block_family(k + 4);
      const auto r = analyze(a);
      Theorem2PaperCheck check;
      check.k = k;
      check.claimed_restricted = 26 * (2 * k + 7) - 6;
      check.computed_restricted = r.restricted_sumset_size;
      check.claimed_difference = 25 * (2 * k + 7);
      check.computed_difference = r.difference_size;
      report.theorem2_paper_checks.push_back(check);
    }
  }

  return report;
}

}  // namespace rsdkit
