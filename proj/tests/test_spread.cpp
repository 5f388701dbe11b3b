#include "doctest.h"

#include "gms/spread.hpp"
#include "test_support.hpp"

using namespace gms;

TEST_CASE("S doubles indices and R reads even coordinates") {
  CHECK(apply_S(FinVector{{1, 1}, {3, 2}}) == FinVector{{2, 1}, {6, 2}});
  CHECK(apply_R(FinVector{{2, 5}, {3, 7}, {4, 1}}) == FinVector{{1, 5}, {2, 1}});
  CHECK(apply_R(FinVector{{1, 1}, {3, 1}}).is_zero());
  CHECK(apply_S_pow(FinVector::unit(3), 3) == FinVector::unit(24));
  CHECK(apply_S_pow(FinVector::unit(3), 0) == FinVector::unit(3));
  CHECK(apply_R_pow(FinVector::unit(24), 3) == FinVector::unit(3));
  CHECK(apply_R_pow(FinVector::unit(12), 3).is_zero());
  CHECK_THROWS_AS(apply_S_pow(FinVector::unit(1), 80), CapacityError);
}

TEST_CASE("r_interval_image") {
  CHECK(r_interval_image(Interval{3, 9}) == Interval{2, 4});
  CHECK(r_interval_image(Interval{2, 2}) == Interval{1, 1});
  CHECK_FALSE(r_interval_image(Interval{3, 3}).has_value());
  CHECK(r_interval_image(Interval{1, 1}) == std::nullopt);
}

TEST_CASE("lambda membership and lifts") {
  FinVector f{{1, 1}, {2, 1}};
  FinVector lift = lambda_canonical_lift(f);
  CHECK(lift == FinVector{{2, 1}, {4, 1}});
  CHECK(lambda_member(lift, f, 1));
  // An odd coordinate inside the range is invisible to R.
  CHECK(lambda_member(FinVector{{2, 1}, {3, 9}, {4, 1}}, f, 1));
  // Range must be exactly doubled.
  CHECK_FALSE(lambda_member(FinVector{{2, 1}, {4, 1}, {5, 1}}, f, 1));
  CHECK_FALSE(lambda_member(FinVector{{2, 1}}, f, 1));
  CHECK(lambda_power_lift(f, 2) == FinVector{{4, 1}, {8, 1}});
  CHECK(lambda_member(lambda_power_lift(f, 2), f, 2));
  CHECK(lambda_power_lift(f, 0) == f);
  CHECK_THROWS_AS(lambda_member(FinVector::unit(2), FinVector{}, 1), InvalidArgument);
  CHECK_THROWS_AS(lambda_member(FinVector::unit(2), f, 0), InvalidArgument);
  CHECK_THROWS_AS(lambda_canonical_lift(FinVector{}), InvalidArgument);
}

TEST_CASE("property: R is the adjoint of S") {
  testing::Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    auto f = testing::random_vector(rng, 1, 40);
    auto x = testing::random_vector(rng, 1, 20);
    CHECK(pair(apply_R(f), x) == pair(f, apply_S(x)));
    int k = static_cast<int>(testing::uniform(rng, 0, 3));
    CHECK(pair(apply_R_pow(f, k), x) == pair(f, apply_S_pow(x, k)));
  }
}

TEST_CASE("property: S is an l1 and linf isometry and R S is the identity") {
  testing::Rng rng(22);
  for (int t = 0; t < 300; ++t) {
    auto x = testing::random_vector(rng, 1, 30);
    CHECK(norm_one(apply_S(x)) == norm_one(x));
    CHECK(norm_infty(apply_S(x)) == norm_infty(x));
    CHECK(apply_R(apply_S(x)) == x);
  }
}

TEST_CASE("property: R commutes with restriction through r_interval_image") {
  testing::Rng rng(23);
  for (int t = 0; t < 300; ++t) {
    auto f = testing::random_vector(rng, 1, 30);
    Index lo = testing::uniform(rng, 1, 30);
    Interval e{lo, testing::uniform(rng, lo, 30)};
    auto image = r_interval_image(e);
    FinVector lhs = apply_R(restrict(f, e));
    if (image) {
      CHECK(lhs == restrict(apply_R(f), *image));
    } else {
      CHECK(lhs.is_zero());
    }
  }
}

TEST_CASE("property: lambda members unfold along the lift chain") {
  testing::Rng rng(24);
  for (int t = 0; t < 200; ++t) {
    auto f = testing::random_nonzero_vector(rng, 1, 12);
    int k = static_cast<int>(testing::uniform(rng, 1, 3));
    auto g = lambda_power_lift(f, k);
    CHECK(lambda_member(g, f, k));
    CHECK(apply_R_pow(g, k) == f);
    // g lies in Lambda(h) for h = R g, and h in Lambda^{k-1}(f).
    auto h = apply_R(g);
    CHECK(lambda_member(g, h, 1));
    if (k > 1) CHECK(lambda_member(h, f, k - 1));
    // Odd-index noise inside the range keeps membership.
    FinVector noisy = g;
    Index lo = g.min_support(), hi = g.max_support();
    for (Index i = lo + 1; i < hi; i += 2) noisy.set(i, 3);
    CHECK(lambda_member(noisy, f, k));
  }
}
