#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "rsdkit/canonical.hpp"

using rsdkit::IntSet;

TEST_CASE("canonicalize worked examples") {
  const auto ap = rsdkit::canonicalize(IntSet::of({2, 4, 6}));
  CHECK(ap.representative == IntSet::of({0, 1, 2}));
  CHECK(ap.shift == 2);
  CHECK(ap.scale == 2);
  CHECK(!ap.reflected);

  const auto refl = rsdkit::canonicalize(IntSet::of({0, 2, 3}));
  CHECK(refl.representative == IntSet::of({0, 1, 3}));
  CHECK(refl.reflected);

  const auto single = rsdkit::canonicalize(IntSet::of({42}));
  CHECK(single.representative == IntSet::of({0}));
  CHECK(single.shift == 42);
  CHECK(single.scale == 1);

  CHECK_THROWS_AS(rsdkit::canonicalize(IntSet{}), rsdkit::PreconditionError);
}

TEST_CASE("affine equivalence worked examples") {
  CHECK(rsdkit::are_affinely_equivalent(IntSet::of({0, 2, 3}), IntSet::of({0, 1, 3})));
  CHECK(!rsdkit::are_affinely_equivalent(IntSet::of({0, 1, 2}), IntSet::of({0, 1, 3})));
}

TEST_CASE("canonical form properties on random sets") {
  std::mt19937_64 rng(0xc0deULL);
  std::uniform_int_distribution<std::int64_t> value(-80, 80);
  std::uniform_int_distribution<int> count(1, 10);
  std::uniform_int_distribution<std::int64_t> shift(-40, 40);
  std::uniform_int_distribution<std::int64_t> scale_mag(1, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    std::set<std::int64_t> elems;
    const int k = count(rng);
    while (static_cast<int>(elems.size()) < k) elems.insert(value(rng));
    const auto a = IntSet::from_elements(std::vector<std::int64_t>(elems.begin(), elems.end()));

    const auto form = rsdkit::canonicalize(a);
    const auto& rep = form.representative;

    // Representative contains 0 and matches the plain-arithmetic oracle.
    CHECK(rep.contains(0));
    CHECK(rep.elements() == oracle::canonical(a.elements()));

    // Applying (shift, scale, reflection) reproduces the input.
    CHECK(rsdkit::apply_canonical_form(form) == a);

    // Idempotence.
    CHECK(rsdkit::canonicalize(rep).representative == rep);

    // Any affine image is equivalent to the original.
    const std::int64_t scale = scale_mag(rng) * (rng() % 2 == 0 ? 1 : -1);
    const auto image = rsdkit::affine_map(a, shift(rng), scale);
    CHECK(rsdkit::are_affinely_equivalent(a, image));
    CHECK(rsdkit::canonicalize(image).representative == rep);
  }
}

TEST_CASE("representative is lexicographically at most its reflection") {
  std::mt19937_64 rng(0x1234ULL);
  std::uniform_int_distribution<std::int64_t> value(0, 50);
  for (int trial = 0; trial < 1000; ++trial) {
    std::set<std::int64_t> elems;
    while (static_cast<int>(elems.size()) < 6) elems.insert(value(rng));
    const auto rep =
        rsdkit::canonicalize(IntSet::from_elements(std::vector<std::int64_t>(elems.begin(), elems.end())))
            .representative;
    const auto reflection = rsdkit::affine_map(rep, rep.max(), -1);
    CHECK(!IntSet::lex_less(reflection, rep));
  }
}
