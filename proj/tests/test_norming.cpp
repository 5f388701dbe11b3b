#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "gms/kset.hpp"
#include "gms/spread.hpp"
#include "test_support.hpp"

using namespace gms;

namespace {

ParameterSchedule accept_sched() {
  return ParameterSchedule::compact({2, 4, 8}, {4, 6, 8}, ExtensionLaw::doubling);
}

FinVector scaled_unit(Index i, long num, unsigned long den) { return FinVector::unit(i, make_rational(num, den)); }

bool no_violations(const ClosureReport& r) {
  for (const auto& v : r.violations) MESSAGE(v);
  return r.ok && r.violation_count == 0;
}

}  // namespace

TEST_CASE("canonical_serialize") {
  CHECK(canonical_serialize({FinVector::unit(1)}) == "1|1[1:1/1]");
  CHECK(canonical_serialize({FinVector::unit(1)}) != canonical_serialize({FinVector::unit(2)}));
  FinVector a;
  a.set(5, make_rational(1, 2));
  a.set(2, -3);
  FinVector b;
  b.set(2, -3);
  b.set(5, make_rational(1, 2));
  CHECK(canonical_serialize({a}) == canonical_serialize({b}));
  CHECK(canonical_serialize({a}) == "1|2[2:-3/1,5:1/2]");
  CHECK(canonical_serialize({}) == "0|");
}

TEST_CASE("sigma_assign examples") {
  SigmaRegistry reg(ScheduleMode::conforming);
  // maxsupp(f_d) = 6 and ||f_1 + f_2||_inf = 1/2: bound 4 * 6 * 2 = 48.
  std::vector<FinVector> seq{scaled_unit(2, 1, 2), scaled_unit(6, 1, 2)};
  CHECK(reg.assign(seq) == 48);
  CHECK(reg.assign(seq) == 48);
  std::vector<FinVector> other{scaled_unit(1, 1, 2), scaled_unit(6, -1, 2)};
  CHECK(reg.assign(other) == 52);
  CHECK(reg.lookup(seq) == 48);
  CHECK(reg.lookup({FinVector::unit(9)}) == 0);
  CHECK_THROWS_AS(reg.assign({FinVector::unit(3), FinVector::unit(2)}), InvalidArgument);
  CHECK_THROWS_AS(reg.assign({}), InvalidArgument);

  SigmaRegistry compact;
  CHECK(compact.assign({FinVector::unit(1)}) == 4);
  CHECK(compact.assign({FinVector::unit(2)}) == 8);
}

TEST_CASE("property: sigma stays injective and persists bit-exactly") {
  testing::Rng rng(41);
  for (auto mode : {ScheduleMode::compact, ScheduleMode::conforming}) {
    SigmaRegistry reg(mode);
    std::set<int> seen;
    std::map<std::string, int> expected;
    for (int t = 0; t < 200; ++t) {
      std::vector<FinVector> seq;
      Index lo = 1;
      long len = testing::uniform(rng, 1, 3);
      for (long i = 0; i < len; ++i) {
        Index hi = lo + testing::uniform(rng, 0, 2);
        seq.push_back(testing::random_nonzero_vector(rng, lo, hi));
        lo = hi + 1;
      }
      int s = reg.assign(seq);
      CHECK(s % 4 == 0);
      auto key = canonical_serialize(seq);
      if (expected.count(key)) {
        CHECK(expected[key] == s);
      } else {
        CHECK(seen.insert(s).second);
        expected[key] = s;
      }
    }
    auto text = reg.to_text();
    auto back = SigmaRegistry::from_text(text);
    CHECK(back == reg);
    CHECK(back.to_text() == text);
  }
}

TEST_CASE("registry file save and load") {
  auto dir = std::filesystem::temp_directory_path() / "gms_registry_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "sigma.tsv";
  std::filesystem::remove(path);
  SigmaRegistry reg;
  reg.assign({FinVector::unit(1)});
  reg.assign({FinVector::unit(1), FinVector::unit(3)});
  reg.save(path);
  auto loaded = SigmaRegistry::load(path);
  CHECK(loaded == reg);
  reg.save(path);
  CHECK(SigmaRegistry::load(path).to_text() == reg.to_text());

  CHECK_THROWS_AS(SigmaRegistry::from_text("mode\tcompact\n0000\t1|1[1:1/1]\t4\n"), ParseError);
  CHECK_THROWS_AS(SigmaRegistry::from_text("1|1[1:1/1]\t4\n"), ParseError);
  std::string good = reg.to_text();
  auto dup = good + good.substr(good.find('\n') + 1);
  CHECK_THROWS_AS(SigmaRegistry::from_text(dup), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_j_special on the compact schedule") {
  auto sched = accept_sched();
  SigmaRegistry reg;
  auto seq = build_j_special(JSpecialSpec{1, 1, 0, 1, 1}, reg, sched);
  REQUIRE(seq.members.size() == 2);
  CHECK(seq.members[0] == scaled_unit(1, 1, 4));
  CHECK(seq.members[1] == scaled_unit(2, 1, 4));
  CHECK(seq.k_list == std::vector<int>{1});
  CHECK(seq.weight_indices == std::vector<int>{2, 2});
  CHECK(lambda_member(seq.members[1], seq.members[0], 1));
  CHECK(verify_special(seq, sched, reg).ok);

  auto wide = build_j_special(JSpecialSpec{1, 2, 0, 1, 2}, reg, sched);
  REQUIRE(wide.members.size() == 4);
  CHECK(wide.members[1] == FinVector{{4, make_rational(1, 4)}, {8, make_rational(1, 4)}});
  CHECK(wide.k_list[0] == 2);
  CHECK(wide.weight_indices[2] % 4 == 0);
  CHECK(wide.weight_indices[2] == reg.lookup({wide.members[0], wide.members[1]}));
  CHECK(verify_special(wide, sched, reg).ok);

  auto broken = wide;
  broken.weight_indices[2] = broken.weight_indices[3] = 12;
  CHECK_FALSE(verify_special(broken, sched, reg).ok);
  broken = wide;
  broken.members[1] = FinVector{{4, make_rational(1, 4)}, {9, make_rational(1, 4)}};
  CHECK_FALSE(verify_special(broken, sched, reg).ok);
}

TEST_CASE("conforming special sequences are infeasible") {
  auto sched = ParameterSchedule::conforming();
  SigmaRegistry reg(ScheduleMode::conforming);
  CHECK(smallest_seed_index(1, sched) == 6);
  CHECK_THROWS_AS(build_j_special(JSpecialSpec{}, reg, sched), CapacityError);
}

TEST_CASE("build_lambda_special") {
  auto sched = accept_sched();
  SigmaRegistry reg;
  auto model = build_j_special(JSpecialSpec{1, 2, 0, 1, 2}, reg, sched);
  CHECK(build_lambda_special(model, 0, sched) == model);
  auto g = build_lambda_special(model, 1, sched);
  CHECK(g.members[0] == lambda_canonical_lift(model.members[0]));
  CHECK(g.weight_indices == model.weight_indices);
  CHECK(verify_lambda_special(g, model, sched).ok);
  auto bad = g;
  bad.members[1] = lambda_power_lift(model.members[1], 2);
  CHECK_FALSE(verify_lambda_special(bad, model, sched).ok);
}

TEST_CASE("tree property of special sequences") {
  auto sched = accept_sched();
  SigmaRegistry reg(ScheduleMode::conforming);
  auto a = build_j_special(JSpecialSpec{1, 2, 0, 1, 1}, reg, sched);
  auto b = build_j_special(JSpecialSpec{1, 2, 0, 3, 1}, reg, sched);
  CHECK(check_tree_property({a, a}, ScheduleMode::conforming).ok);
  auto rep = check_tree_property({a, b}, ScheduleMode::conforming);
  CHECK(rep.ok);

  // Divergence in the last pair leaves nothing to compare.
  auto c = a;
  c.members[2] = FinVector::unit(5, c.members[2].get(c.members[2].min_support()));
  c.members[3] = lambda_canonical_lift(c.members[2]);
  CHECK(check_tree_property({a, c}, ScheduleMode::conforming).ok);

  auto clash = b;
  clash.weight_indices[2] = clash.weight_indices[3] = a.weight_indices[2];
  CHECK_FALSE(check_tree_property({a, clash}, ScheduleMode::conforming).ok);
  auto compact = check_tree_property({a, clash}, ScheduleMode::compact);
  CHECK(compact.ok);
  CHECK_FALSE(compact.caveats.empty());
}

TEST_CASE("K0 only") {
  KCaps caps;
  caps.generation_cap = 0;
  caps.window = 5;
  auto ctx = generate_K(caps, accept_sched());
  CHECK(ctx.records().size() == 10);
  for (Index i = 1; i <= 5; ++i) {
    CHECK(ctx.contains(FinVector::unit(i)));
    CHECK(ctx.contains(FinVector::unit(i, -1)));
  }
  CHECK(no_violations(check_K1(ctx)));
  CHECK(no_violations(check_K2(ctx)));
  CHECK(no_violations(check_K3(ctx)));
}

TEST_CASE("generation one with weight index 1 on four coordinates") {
  KCaps caps;
  caps.generation_cap = 1;
  caps.window = 4;
  caps.max_support_size = 4;
  caps.arity_cap = 4;
  caps.regular_weights = {1};
  auto ctx = generate_K(caps, accept_sched());
  // 8 terminals plus (1/2) times each nonempty signed subset: 3^4 - 1 = 80.
  CHECK(ctx.records().size() == 88);
  CHECK(ctx.contains(FinVector{{1, make_rational(1, 2)}, {3, make_rational(-1, 2)}, {4, make_rational(1, 2)}}));
  CHECK(no_violations(check_K1(ctx)));
  CHECK(no_violations(check_K2(ctx)));
}

TEST_CASE("generation-two regular-only context passes K1-K3") {
  KCaps caps;
  caps.generation_cap = 2;
  caps.window = 8;
  auto ctx = generate_K(caps, accept_sched());
  CHECK(ctx.saturated());
  CHECK(no_violations(check_K1(ctx)));
  CHECK(no_violations(check_K2(ctx)));
  auto k3 = check_K3(ctx);
  CHECK(no_violations(k3));
  CHECK(k3.structural > 0);
}

TEST_CASE("context with a special sequence passes K1-K3") {
  auto sched = accept_sched();
  SigmaRegistry reg;
  auto model = build_j_special(JSpecialSpec{1, 1, 0, 1, 1}, reg, sched);
  KCaps caps;
  caps.generation_cap = 3;
  caps.window = 8;
  auto ctx = generate_K(caps, sched, {model}, reg);
  CHECK(ctx.saturated());
  // R-special (1/2)(1/4)(e_1^* + e_2^*) and its Lambda lifts.
  CHECK(ctx.find(FinVector{{1, make_rational(1, 8)}, {2, make_rational(1, 8)}}, 1).has_value());
  CHECK(ctx.find(FinVector{{2, make_rational(1, 8)}, {4, make_rational(1, 8)}}, 1).has_value());
  CHECK(ctx.find(FinVector{{1, make_rational(-1, 8)}}, 1).has_value());
  CHECK(no_violations(check_K1(ctx)));
  CHECK(no_violations(check_K2(ctx)));
  CHECK(no_violations(check_K3(ctx)));
  bool has_lambda = false;
  for (const auto& r : ctx.records()) has_lambda = has_lambda || r.formation == Formation::lambda_special;
  CHECK(has_lambda);
}

TEST_CASE("K monotonicity across generations") {
  KCaps caps;
  caps.window = 8;
  std::set<std::string> previous;
  for (int g = 0; g <= 3; ++g) {
    caps.generation_cap = g;
    auto ctx = generate_K(caps, accept_sched());
    std::set<std::string> now;
    for (const auto& r : ctx.records()) now.insert(to_string(r.f) + "#" + std::to_string(r.weight_index));
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
    previous = std::move(now);
  }
}

TEST_CASE("planted records fail the closure checks") {
  KCaps caps;
  caps.generation_cap = 2;
  caps.window = 8;
  auto sched = accept_sched();

  SUBCASE("missing negation fails K1") {
    auto ctx = generate_K(caps, sched);
    KRecord rec;
    rec.f = FinVector{{1, make_rational(1, 3)}};
    rec.formation = Formation::admitted;
    ctx.admit(rec);
    CHECK_FALSE(check_K1(ctx).ok);
    CHECK_FALSE(check_K2(ctx).ok);
  }
  SUBCASE("wrong formation fails K2") {
    auto ctx = generate_K(caps, sched);
    KRecord rec;
    rec.f = FinVector{{1, make_rational(1, 4)}, {2, make_rational(1, 2)}};
    rec.formation = Formation::regular;
    rec.weight_index = 2;
    rec.children = {*ctx.find(FinVector::unit(1)), *ctx.find(FinVector::unit(2))};
    rec.generation = 1;
    ctx.admit(rec);
    CHECK_FALSE(check_K2(ctx).ok);
  }
  SUBCASE("missing R image fails K3 forward") {
    auto ctx = generate_K(caps, sched);
    KRecord rec;
    rec.f = FinVector{{2, make_rational(1, 4)}, {4, make_rational(1, 4)}, {6, make_rational(1, 4)}};
    rec.formation = Formation::admitted;
    ctx.admit(rec);
    auto r = check_K3(ctx);
    CHECK_FALSE(r.ok);
    CHECK(r.violations.front().find("forward") != std::string::npos);
  }
  SUBCASE("non-lifted functional fails K3 backward") {
    auto ctx = generate_K(caps, sched);
    KRecord rec;
    rec.f = FinVector{{1, make_rational(1, 4)}, {2, make_rational(1, 4)}, {3, make_rational(1, 4)}};
    rec.formation = Formation::regular;
    rec.weight_index = 2;
    rec.children = {*ctx.find(FinVector::unit(1)), *ctx.find(FinVector::unit(2)), *ctx.find(FinVector::unit(3))};
    rec.generation = 1;
    ctx.admit(rec);
    auto r = check_K3(ctx);
    CHECK_FALSE(r.ok);
    bool backward = false;
    for (const auto& v : r.violations) backward = backward || v.find("backward") != std::string::npos;
    CHECK(backward);
  }
}
