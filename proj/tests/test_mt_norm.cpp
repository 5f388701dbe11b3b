#include "doctest.h"

#include "gms/mt_norm.hpp"
#include "test_support.hpp"

using namespace gms;

namespace {

ParameterSchedule small() { return ParameterSchedule::compact({2, 4}, {4, 6}, ExtensionLaw::doubling); }
// Arity binds on short supports, exercising the bounded-partition branch.
ParameterSchedule tight() { return ParameterSchedule::compact({2, 4}, {2, 4}, ExtensionLaw::doubling); }

FinVector ones(Index lo, Index hi) {
  FinVector v;
  for (Index i = lo; i <= hi; ++i) v.set(i, 1);
  return v;
}

FinVector from_digits(const std::vector<int>& c) {
  FinVector v;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) v.set(static_cast<Index>(i + 1), c[i]);
  return v;
}

void check_result(const FinVector& x, const ParameterSchedule& sched) {
  auto r = mt_norm_exact(x, sched);
  REQUIRE(r.exact);
  REQUIRE(r.certificate.has_value());
  CHECK(verify_certificate_structure(*r.certificate, sched).ok);
  CHECK(evaluate_certificate(*r.certificate, x, sched) == r.value);
}

}  // namespace

TEST_CASE("effective_j_bound examples") {
  auto sched = small();
  CHECK(effective_j_bound(FinVector::unit(1), sched) == 0);
  CHECK(effective_j_bound(ones(1, 4), sched) == 2);
  CHECK(effective_j_bound(FinVector{{1, 2}}, sched) == 0);
  CHECK_THROWS_AS(effective_j_bound(FinVector{}, sched), InvalidArgument);
}

TEST_CASE("mt_norm_exact examples") {
  auto sched = small();
  auto r = mt_norm_exact(FinVector::unit(3), sched);
  CHECK(r.value == 1);
  CHECK(*r.certificate == TreeCertificate::terminal(1, 3));

  r = mt_norm_exact(ones(1, 4), sched);
  CHECK(r.value == 2);
  CHECK(serialize(*r.certificate) == serialize(TreeCertificate::weighted(
                                         1, 1, NodeTag::regular, Interval{1, 4},
                                         {TreeCertificate::terminal(1, 1), TreeCertificate::terminal(1, 2),
                                          TreeCertificate::terminal(1, 3), TreeCertificate::terminal(1, 4)})));
  CHECK(mt_norm_exact(ones(1, 2), sched).value == 1);
  CHECK_THROWS_AS(mt_norm_exact(FinVector{}, sched), InvalidArgument);
}

TEST_CASE("mt_norm_oracle examples") {
  auto sched = small();
  CHECK(mt_norm_oracle(ones(1, 4), sched, 4) == 2);
  CHECK(mt_norm_oracle(FinVector::unit(5), sched, 1) == 1);
  CHECK(mt_norm_oracle(FinVector{{1, 1}, {2, -1}}, sched, 2) == 1);
  CHECK_THROWS_AS(mt_norm_oracle(ones(1, 12), sched, 12, 500), CapacityError);
}

TEST_CASE("hand-derived values") {
  // Norms of k ones under m = (2,4), n = (4,6): 1, 1, 3/2, 2, 2, 9/4, 5/2.
  // For eight ones four pieces of sizes (4,2,1,1) give (1/2)(2+1+1+1) = 5/2,
  // and the six-piece weight-1/4 node reaches only (1/4)(3/2+5) = 13/8.
  auto sched = small();
  CHECK(mt_norm_exact(ones(1, 8), sched).value == make_rational(5, 2));
  CHECK(mt_norm_oracle(ones(1, 8), sched, 8) == make_rational(5, 2));
  CHECK(mt_norm_exact(ones(1, 6), sched).value == make_rational(9, 4));
}

TEST_CASE("DP agrees with the oracle on every small pattern") {
  // All vectors on [1,4] with coordinates in {-2,-1,0,1,2}, two schedules.
  for (const auto& sched : {small(), tight()}) {
    std::vector<int> c(4, -2);
    for (;;) {
      FinVector x = from_digits(c);
      if (!x.is_zero()) {
        auto s = static_cast<int>(x.support_size());
        CHECK(mt_norm_exact(x, sched).value == mt_norm_oracle(x, sched, s));
      }
      std::size_t k = 0;
      while (k < c.size() && c[k] == 2) c[k++] = -2;
      if (k == c.size()) break;
      ++c[k];
    }
  }
}

TEST_CASE("property: DP agrees with the oracle on random supports in [1,6]") {
  testing::Rng rng(31);
  const int digits[] = {-2, -1, 1, 2};
  for (int t = 0; t < 500; ++t) {
    const auto sched = t % 2 ? small() : tight();
    FinVector x;
    while (x.is_zero())
      for (Index i = 1; i <= 6; ++i)
        if (testing::uniform(rng, 0, 2)) x.set(i, digits[testing::uniform(rng, 0, 3)]);
    auto s = static_cast<int>(x.support_size());
    INFO(to_string(x));
    CHECK(mt_norm_exact(x, sched).value == mt_norm_oracle(x, sched, s));
  }
}

TEST_CASE("property: sandwich, unconditionality, soundness, monotonicity") {
  testing::Rng rng(32);
  auto sched = ParameterSchedule::default_compact();
  for (int t = 0; t < 200; ++t) {
    auto x = testing::random_nonzero_vector(rng, 1, 24, 0.7);
    auto r = mt_norm_exact(x, sched);
    CHECK(norm_infty(x) <= r.value);
    CHECK(r.value <= norm_one(x));
    check_result(x, sched);

    FinVector flipped;
    for (const auto& [i, v] : x) flipped.set(i, testing::uniform(rng, 0, 1) ? v : Rational(-v));
    CHECK(mt_norm_exact(flipped, sched).value == r.value);

    Index lo = testing::uniform(rng, 1, 24);
    Interval e{lo, testing::uniform(rng, lo, 24)};
    auto cut = restrict(x, e);
    if (!cut.is_zero()) CHECK(mt_norm_exact(cut, sched).value <= r.value);
  }
}

TEST_CASE("arity relaxation gives an upper bound") {
  auto sched = ParameterSchedule::default_compact();
  testing::Rng rng(33);
  for (int t = 0; t < 30; ++t) {
    auto x = testing::random_nonzero_vector(rng, 1, 30, 0.8);
    auto exact = mt_norm_exact(x, sched);
    auto relaxed = mt_norm_exact(x, sched, MtOptions{4});
    CHECK(relaxed.value >= exact.value);
    if (relaxed.exact) CHECK(relaxed.value == exact.value);
  }
}
