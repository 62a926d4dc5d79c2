#include <doctest.h>

#include "helpers.hpp"
#include "lrsca/certify.hpp"
#include "lrsca/generate.hpp"

using namespace lrsca;
using testing::Q;

namespace {
const Tolerance kExact = Tolerance::exact();
}

TEST_CASE("planted instances are valid and reproducible") {
  const GenSpec spec{3, 2, {4, 3, 2}, 17, 0};
  const auto a = planted_instance<Q>(spec);
  const auto b = planted_instance<Q>(spec);
  CHECK(a.instance.data() == b.instance.data());
  CHECK(a.truth.D == b.truth.D);
  CHECK(a.instance.n() == 9);
  CHECK(validate(a.instance, a.truth, kExact).passed());
  CHECK(a.index_sets[0].size() == 4);
  CHECK(a.index_sets[2].size() == 2);

  const auto c = planted_instance<Q>(GenSpec{3, 2, {4, 3, 2}, 18, 0});
  CHECK_FALSE(a.instance.data() == c.instance.data());
}

TEST_CASE("planted sparsity pattern") {
  const auto p = planted_instance<Q>(GenSpec{5, 2, {3, 3, 3, 3, 3}, 9, 7});
  CHECK(p.instance.p() == 7);
  for (std::size_t i = 0; i < p.instance.n(); ++i) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < 5; ++j) zeros += p.truth.B(j, i) == 0;
    CHECK(zeros == 3);
  }
  for (std::size_t j = 0; j < 5; ++j)
    for (auto i : p.index_sets[j]) CHECK(p.truth.B(j, i) == 0);
}

TEST_CASE("planted spec errors") {
  auto code = [](const GenSpec& s) {
    try {
      planted_instance<Q>(s);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::parse_error;
  };
  CHECK(code(GenSpec{3, 3, {1, 1, 1}, 0, 0}) == Errc::invalid_params);
  CHECK(code(GenSpec{3, 2, {1, 1}, 0, 0}) == Errc::invalid_params);
  CHECK(code(GenSpec{3, 2, {1, 0, 1}, 0, 0}) == Errc::invalid_params);
  CHECK(code(GenSpec{3, 2, {1, 1, 1}, 0, 2}) == Errc::invalid_params);
}

TEST_CASE("staircase and well-covered configurations") {
  const auto st = planted_instance<Q>(GenSpec{3, 2, {4, 3, 2}, 1, 0});
  const auto z = membership(st.instance, st.truth.D, kExact);
  CHECK(z.index_set(0).size() == 4);
  CHECK(z.index_set(1).size() == 3);
  CHECK(z.index_set(2).size() == 2);

  const auto t1 = planted_instance<Q>(GenSpec{3, 2, {4, 4, 4}, 1, 0});
  const auto z1 = membership(t1.instance, t1.truth.D, kExact);
  CHECK(certify_theorem1(t1.instance, z1, kExact).has_value());

  for (std::size_t r : {3, 4}) {
    const auto k1 = planted_instance<Q>(GenSpec{r, 1, std::vector<std::size_t>(r, 1), 3, 0});
    CHECK(k1.instance.n() == r);
    CHECK(validate(k1.instance, k1.truth, kExact).passed());
  }
}

TEST_CASE("counterexample construction") {
  for (std::size_t r : {3, 4}) {
    const auto ce = counterexample<Q>(r, 7);
    CHECK(ce.instance.n() == r * r * r - 2 * r * r);
    CHECK(ce.instance.k() == r - 1);
    CHECK(validate(ce.instance, ce.first, kExact).passed());
    CHECK(validate(ce.instance, ce.second, kExact).passed());
    for (const auto* dec : {&ce.first, &ce.second}) {
      const auto z = membership(ce.instance, dec->D, kExact);
      for (std::size_t j = 0; j < r; ++j) {
        const auto idx = z.index_set(j);
        CHECK(idx.size() == r * (r - 2));
        CHECK(spark(ce.instance.data().select_columns(idx), kExact) == r);
      }
    }
    CHECK_FALSE(essentially_equal(ce.first.D, ce.second.D, kExact).has_value());
  }
  try {
    counterexample<Q>(2, 1);
    FAIL("expected InvalidR");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_r);
  }
  const auto cf = counterexample<double>(3, 7);
  CHECK(validate(cf.instance, cf.second, Tolerance::relative()).passed());
}

TEST_CASE("staircase counts") {
  CHECK(staircase_counts(3) == std::vector<std::size_t>{4, 3, 2});
  CHECK(staircase_counts(4) == std::vector<std::size_t>{9, 7, 5, 3});
  const auto st = staircase_instance<Q>(3, 1);
  CHECK(st.instance.n() == 9);
  CHECK(st.instance.k() == 2);
  const auto z = membership(st.instance, st.truth.D, kExact);
  CHECK_FALSE(certify_theorem1(st.instance, z, kExact).has_value());
  for (std::size_t r = 3; r <= 8; ++r) CHECK(staircase_counts(r).back() < lemma2_bound(r, r - 1));
  CHECK_THROWS_AS(staircase_instance<Q>(2, 1), Error);
}

TEST_CASE("rng determinism") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    const auto q = c.nonzero_rational();
    CHECK(q != 0);
    CHECK(abs(q.get_num()) <= kRationalBound);
    CHECK(q.get_den() <= kRationalBound);
  }
  // The engine output is pinned by the standard: 10000th draw for seed 5489.
  Rng fixed(5489);
  for (int i = 0; i < 9999; ++i) fixed.next_u64();
  CHECK(fixed.next_u64() == 9981545732273789042ULL);
}
