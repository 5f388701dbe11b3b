#include "doctest.h"

#include "gms/certificate.hpp"
#include "gms/fin_vector.hpp"
#include "gms/spread.hpp"
#include "test_support.hpp"

using namespace gms;

namespace {

ParameterSchedule two_four() {
  return ParameterSchedule::compact({2, 4, 8}, {4, 6, 8}, ExtensionLaw::doubling);
}

FinVector ones(Index lo, Index hi) {
  FinVector v;
  for (Index i = lo; i <= hi; ++i) v.set(i, 1);
  return v;
}

TreeCertificate flat_regular(Interval e, Index lo, Index hi, int j = 1) {
  std::vector<TreeCertificate> leaves;
  for (Index i = lo; i <= hi; ++i) leaves.push_back(TreeCertificate::terminal(1, i));
  return TreeCertificate::weighted(1, j, NodeTag::regular, e, std::move(leaves));
}

// Restricting x to E equals restricting the denoted functional, which only
// needs the root interval intersected with E.
TreeCertificate push_restriction(const TreeCertificate& c, const Interval& e) {
  if (c.is_terminal()) return e.contains(c.index) ? c : TreeCertificate::zero();
  auto cut = intersect(c.restriction, e);
  if (!cut) return TreeCertificate::zero();
  TreeCertificate out = c;
  out.restriction = *cut;
  return out;
}

}  // namespace

TEST_CASE("restrict keeps only coordinates inside E") {
  CHECK(restrict(FinVector{{1, 1}, {3, 2}}, Interval{2, 5}) == FinVector{{3, 2}});
  CHECK(restrict(FinVector{{2, 1}}, Interval{3, 9}).is_zero());
  FinVector v{{1, 1}, {2, 1}, {3, 1}};
  CHECK(restrict(v, Interval{1, 3}) == v);
}

TEST_CASE("pair is the exact duality") {
  CHECK(pair(FinVector::unit(1), FinVector::unit(1)) == 1);
  CHECK(pair(FinVector{{1, 1}, {2, 1}}, FinVector{{1, 1}, {2, -1}}) == 0);
  FinVector half{{1, make_rational(1, 2)}, {2, make_rational(1, 2)}};
  CHECK(pair(half, ones(1, 2)) == 1);
}

TEST_CASE("norm_one and norm_infty") {
  FinVector v{{1, 3}, {2, -4}};
  CHECK(norm_one(v) == 7);
  CHECK(norm_infty(v) == 4);
  CHECK(norm_one(FinVector{}) == 0);
  CHECK(norm_infty(FinVector{}) == 0);
  CHECK(norm_one(FinVector::unit(5)) == 1);
  CHECK(norm_infty(FinVector::unit(5)) == 1);
}

TEST_CASE("vector text format") {
  FinVector v = parse_vector("3:-1/2, 1:2");
  CHECK(v == FinVector{{1, 2}, {3, make_rational(-1, 2)}});
  CHECK(to_string(v) == "1:2/1,3:-1/2");
  CHECK(parse_vector("").is_zero());
  CHECK_THROWS_AS(parse_vector("0:1"), ParseError);
  CHECK_THROWS_AS(parse_vector("1:1,,2:1"), ParseError);
  CHECK_THROWS_AS(parse_vector("1:1/0"), ParseError);
  CHECK_THROWS_AS(parse_vector("1:1,1:2"), ParseError);
  CHECK_THROWS_AS(parse_vector("x"), ParseError);
}

TEST_CASE("evaluate_certificate examples") {
  auto sched = two_four();
  CHECK(evaluate_certificate(TreeCertificate::terminal(1, 3), FinVector{{3, make_rational(5, 2)}}, sched) ==
        make_rational(5, 2));
  auto c = flat_regular(Interval{1, 4}, 1, 4);
  CHECK(evaluate_certificate(c, ones(1, 4), sched) == 2);
  auto cut = flat_regular(Interval{1, 2}, 1, 4);
  CHECK(evaluate_certificate(cut, ones(1, 4), sched) == 1);
}

TEST_CASE("verify_certificate_structure diagnostics") {
  auto sched = two_four();
  auto too_wide = flat_regular(Interval{1, 5}, 1, 5);
  auto r = verify_certificate_structure(too_wide, sched);
  CHECK_FALSE(r.ok);
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics.front().find("arity") != std::string::npos);

  CHECK(verify_certificate_structure(TreeCertificate::terminal(1, 1), sched).ok);

  auto overlap = TreeCertificate::weighted(
      1, 1, NodeTag::regular, Interval{1, 4},
      {TreeCertificate::terminal(1, 2), TreeCertificate::terminal(1, 2)});
  r = verify_certificate_structure(overlap, sched);
  CHECK_FALSE(r.ok);
  CHECK(r.diagnostics.front().find("blockness") != std::string::npos);
  CHECK_THROWS_AS(evaluate_certificate(overlap, ones(1, 4), sched), CertificateError);

  auto bad_sign = TreeCertificate::terminal(2, 1);
  CHECK_FALSE(verify_certificate_structure(bad_sign, sched).ok);
}

TEST_CASE("certificate JSON is canonical and round-trips") {
  auto sched = two_four();
  testing::Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    auto c = testing::random_certificate(rng, sched, 1, 10, 3, 3, true);
    std::string s = serialize(c);
    auto back = parse_certificate(s);
    CHECK(back == c);
    CHECK(serialize(back) == s);
  }
  auto c = TreeCertificate::weighted(-1, 2, NodeTag::r_special, Interval{1, 4},
                                     {TreeCertificate::terminal(1, 2)}, 1);
  CHECK(serialize(c) ==
        R"({"E":[1,4],"children":[{"index":2,"kind":"terminal","sign":1}],"j":2,"k":1,"kind":"weighted","sign":-1,"tag":"r_special"})");
  CHECK_THROWS_AS(parse_certificate("{"), ParseError);
  CHECK_THROWS_AS(parse_certificate(R"({"kind":"weighted","sign":1,"j":1,"tag":"x","E":[1,2],"children":[]})"),
                  ParseError);
}

TEST_CASE("property: vector-side evaluation equals flattened pairing") {
  auto sched = two_four();
  testing::Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    auto c = testing::random_certificate(rng, sched, 1, 12, 4, 3, true);
    auto x = testing::random_vector(rng, 1, 14);
    CHECK(evaluate_certificate(c, x, sched) == pair(flatten(c, sched), x));
  }
}

TEST_CASE("property: restriction pushes into the certificate") {
  auto sched = two_four();
  testing::Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    auto c = testing::random_certificate(rng, sched, 1, 12, 4, 3, true);
    auto x = testing::random_vector(rng, 1, 14);
    Index lo = testing::uniform(rng, 1, 12);
    Interval e{lo, testing::uniform(rng, lo, 14)};
    CHECK(evaluate_certificate(c, restrict(x, e), sched) ==
          evaluate_certificate(push_restriction(c, e), x, sched));
  }
}

TEST_CASE("property: certificate values are dominated by l1 and shrink with depth") {
  auto sched = two_four();
  testing::Rng rng(13);
  auto min_leaf_depth = [](const TreeCertificate& c, auto&& self) -> int {
    if (c.is_terminal()) return 0;
    if (c.children.empty()) return 1 << 20;
    int d = 1 << 20;
    for (const auto& ch : c.children) d = std::min(d, self(ch, self));
    return d + 1;
  };
  for (int t = 0; t < 300; ++t) {
    auto c = testing::random_certificate(rng, sched, 1, 12, 4);
    auto x = testing::random_vector(rng, 1, 12);
    Rational v = ::abs(evaluate_certificate(c, x, sched));
    CHECK(v <= norm_one(x));
    int d = std::min(min_leaf_depth(c, min_leaf_depth), 30);
    Rational bound = norm_one(x) / Rational(Integer(1) << d);
    CHECK(v <= bound);
  }
}
