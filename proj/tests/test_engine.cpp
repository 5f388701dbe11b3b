#include "doctest.h"

#include "gms/engine.hpp"
#include "gms/mt_norm.hpp"
#include "gms/spread.hpp"
#include "test_support.hpp"

using namespace gms;

namespace {

ParameterSchedule accept_sched() {
  return ParameterSchedule::compact({2, 4, 8}, {4, 6, 8}, ExtensionLaw::doubling);
}

const KContext& special_ctx() {
  static const KContext ctx = [] {
    auto sched = ParameterSchedule::default_compact();
    SigmaRegistry reg;
    auto model = build_j_special(JSpecialSpec{1, 1, 2, 1, 1}, reg, sched);
    KCaps caps;
    caps.generation_cap = 3;
    caps.window = 16;
    return generate_K(caps, sched, {model}, reg);
  }();
  return ctx;
}

FinVector ones(Index lo, Index hi) {
  FinVector x;
  for (Index i = lo; i <= hi; ++i) x.set(i, 1);
  return x;
}

}  // namespace

TEST_CASE("gm_norm_lower examples") {
  KCaps caps;
  caps.generation_cap = 0;
  caps.window = 6;
  auto k0 = generate_K(caps, accept_sched());
  CHECK(gm_norm_lower(FinVector::unit(1), k0).value == 1);
  FinVector x{{1, 3}, {2, -5}, {4, make_rational(1, 2)}};
  auto lb = gm_norm_lower(x, k0);
  CHECK(lb.value == 5);
  CHECK(lb.certificate == TreeCertificate::terminal(-1, 2));
  CHECK(evaluate_certificate(lb.certificate, x, k0.schedule()) == 5);

  caps.generation_cap = 1;
  caps.window = 4;
  caps.max_support_size = 4;
  caps.arity_cap = 4;
  caps.regular_weights = {1};
  auto g1 = generate_K(caps, accept_sched());
  auto four = gm_norm_lower(ones(1, 4), g1);
  CHECK(four.value == 2);
  CHECK(four.certificate.j == 1);
  CHECK(four.certificate.children.size() == 4);
  CHECK(gm_norm_lower(-ones(1, 4), g1).value == 2);
  CHECK(evaluate_certificate(gm_norm_lower(-ones(1, 4), g1).certificate, -ones(1, 4), g1.schedule()) == 2);

  KContext empty(accept_sched(), KCaps{});
  CHECK_THROWS_AS(gm_norm_lower(FinVector::unit(1), empty), InvalidArgument);
}

TEST_CASE("gm_norm_bracket examples") {
  KCaps caps;
  caps.generation_cap = 3;
  caps.window = 8;
  auto ctx = generate_K(caps, ParameterSchedule::default_compact());
  auto b = gm_norm_bracket(FinVector::unit(1), ctx, 3);
  CHECK(b.lower == 1);
  CHECK(b.upper == make_rational(9, 8));
  CHECK(*b.certified_upper == 1);
  CHECK_FALSE(b.caveats.empty());

  auto b2 = gm_norm_bracket(ones(1, 2), ctx, 6);
  CHECK(b2.lower == 1);
  CHECK(b2.enumerated == 1);
  CHECK(b2.upper == 1 + make_rational(2, 64));
  bool depth_caveat = false;
  for (const auto& c : b2.caveats) depth_caveat = depth_caveat || c.find("below depth cap") != std::string::npos;
  CHECK(depth_caveat);

  auto j = to_json(b2);
  CHECK(j["lower"] == "1/1");
  CHECK(j["depthCap"] == 6);
  CHECK(j.contains("certificate"));
}

TEST_CASE("property: bracket sandwich and lower-bound monotonicity") {
  testing::Rng rng(7);
  KCaps caps;
  caps.window = 8;
  std::vector<KContext> ctxs;
  for (int g = 0; g <= 3; ++g) {
    caps.generation_cap = g;
    ctxs.push_back(generate_K(caps, ParameterSchedule::default_compact()));
  }
  for (int t = 0; t < 60; ++t) {
    auto x = testing::random_vector(rng, 1, 8);
    Rational prev = -1;
    for (const auto& ctx : ctxs) {
      auto b = gm_norm_bracket(x, ctx, 3);
      CHECK(norm_infty(x) <= b.lower);
      CHECK(b.lower <= b.upper);
      CHECK(b.lower <= *b.certified_upper);
      CHECK(*b.certified_upper <= norm_one(x));
      CHECK(prev <= b.lower);
      CHECK(evaluate_certificate(b.lower_cert, x, ctx.schedule()) == b.lower);
      prev = b.lower;
    }
  }
}

TEST_CASE("gm_norm_lower equals the mixed Tsirelson norm without special functionals") {
  auto sched = ParameterSchedule::compact({2, 4}, {2, 4}, ExtensionLaw::doubling);
  KCaps caps;
  caps.generation_cap = 3;
  caps.window = 4;
  caps.max_support_size = 4;
  caps.arity_cap = 2;
  caps.regular_weights = {1};
  auto ctx = generate_K(caps, sched);
  int count = 0;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          FinVector x{{1, a}, {2, b}, {3, c}, {4, d}};
          if (!x.is_zero()) CHECK(gm_norm_lower(x, ctx).value == mt_norm_exact(x, sched).value);
          ++count;
        }
  CHECK(count == 625);
}

TEST_CASE("certificate transfers") {
  CHECK(transfer_certificate_S(TreeCertificate::terminal(1, 1)) == TreeCertificate::terminal(1, 2));
  CHECK(transfer_certificate_R(TreeCertificate::terminal(-1, 6)) == TreeCertificate::terminal(-1, 3));
  CHECK(transfer_certificate_R(TreeCertificate::terminal(1, 5)).is_zero_node());

  const auto& ctx = special_ctx();
  const auto& sched = ctx.schedule();
  testing::Rng rng(3);
  int specials = 0;
  for (RecordId id = 0; id < ctx.records().size(); ++id) {
    if (id % 97 != 0 && ctx.record(id).formation == Formation::regular) continue;
    auto c = ctx.certificate(id);
    FinVector f = ctx.record(id).f;
    specials += ctx.record(id).formation == Formation::r_special;
    auto g = transfer_certificate_S(c);
    CHECK(verify_certificate_structure(g, sched).ok);
    FinVector h = flatten(g, sched);
    CHECK(apply_R(h) == f);
    if (ctx.within_caps(h)) {
      CHECK(ctx.contains(h));
    } else {
      CHECK_THROWS_AS(transfer_certificate_S(c, ctx), CapacityError);
    }
    auto x = testing::random_vector(rng, 1, 8);
    CHECK(evaluate_certificate(g, apply_S(x), sched) == evaluate_certificate(c, x, sched));
    auto r = transfer_certificate_R(c);
    CHECK(verify_certificate_structure(r, sched).ok);
    CHECK(flatten(r, sched) == apply_R(f));
    CHECK(evaluate_certificate(r, x, sched) == evaluate_certificate(c, apply_S(x), sched));
  }
  CHECK(specials > 0);
}

TEST_CASE("isometry on the special context") {
  const auto& ctx = special_ctx();
  auto e1 = isometry_check(FinVector::unit(1), ctx);
  CHECK(e1.ok);
  CHECK(e1.norm_x == 1);
  CHECK(e1.lifted == TreeCertificate::terminal(1, 2));

  testing::Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    auto rep = isometry_check(testing::random_vector(rng, 1, 8), ctx);
    for (const auto& d : rep.diagnostics) MESSAGE(d);
    CHECK(rep.ok);
    CHECK(rep.norm_x == rep.norm_sx);
  }
  auto j = to_json(e1);
  CHECK(j["ok"] == true);
}
