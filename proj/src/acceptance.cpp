#include "gms/acceptance.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gms/constructions.hpp"
#include "gms/mt_norm.hpp"
#include "gms/spread.hpp"

namespace gms {

namespace {

using Rng = std::mt19937_64;

long draw(Rng& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

ParameterSchedule oracle_schedule() {
  return ParameterSchedule::compact({2, 4, 8}, {4, 6, 8}, ExtensionLaw::doubling);
}

KContext acceptance_context() {
  auto sched = ParameterSchedule::default_compact();
  SigmaRegistry reg;
  auto model = build_j_special(JSpecialSpec{1, 1, 2, 1, 1}, reg, sched);
  KCaps caps;
  caps.generation_cap = 3;
  caps.window = 16;
  return generate_K(caps, sched, {model}, reg);
}

/// Distinct vectors on [1,6] with coordinates in {-2,-1,1,2} off a random zero set.
std::vector<FinVector> oracle_corpus(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::set<std::string> seen;
  std::vector<FinVector> out;
  const long vals[] = {-2, -1, 1, 2};
  while (out.size() < count) {
    FinVector x;
    for (Index i = 1; i <= 6; ++i)
      if (draw(rng, 0, 3) != 0) x.set(i, vals[draw(rng, 0, 3)]);
    if (x.is_zero() || !seen.insert(to_string(x)).second) continue;
    out.push_back(std::move(x));
  }
  return out;
}

FinVector random_rational_vector(Rng& rng, Index lo, Index hi) {
  FinVector x;
  while (x.is_zero())
    for (Index i = lo; i <= hi; ++i)
      if (draw(rng, 0, 2) != 0) x.set(i, make_rational(draw(rng, -9, 9), static_cast<unsigned long>(draw(rng, 1, 6))));
  return x;
}

CriterionResult oracle_equivalence(const AcceptanceConfig& cfg) {
  CriterionResult r{1, "oracle equivalence", true, "", {}, 0, 300};
  auto sched = oracle_schedule();
  auto corpus = oracle_corpus(cfg.seed, 600);
  std::size_t agree = 0;
  for (const auto& x : corpus) {
    auto exact = mt_norm_exact(x, sched);
    if (exact.value == mt_norm_oracle(x, sched, 6) &&
        evaluate_certificate(*exact.certificate, x, sched) == exact.value)
      ++agree;
    else if (r.data["mismatches"].size() < 5)
      r.data["mismatches"].push_back(to_string(x));
  }
  r.pass = agree == corpus.size();
  r.detail = std::to_string(agree) + "/" + std::to_string(corpus.size()) + " exact equal (tolerance: exact)";
  r.data["vectors"] = corpus.size();
  r.data["agree"] = agree;
  return r;
}

CriterionResult sandwich(const AcceptanceConfig& cfg) {
  CriterionResult r{2, "sandwich and unconditionality", true, "", {}, 0, 300};
  auto sched = oracle_schedule();
  auto corpus = oracle_corpus(cfg.seed, 600);
  Rng rng(cfg.seed ^ 0x5a5a);
  std::size_t ok = 0, flips = 0;
  for (const auto& x : corpus) {
    Rational v = mt_norm_exact(x, sched).value;
    bool good = norm_infty(x) <= v && v <= norm_one(x);
    for (int t = 0; t < 4; ++t) {
      FinVector y;
      for (const auto& [i, c] : x) y.set(i, draw(rng, 0, 1) ? c : Rational(-c));
      good = good && mt_norm_exact(y, sched).value == v;
      ++flips;
    }
    good = good && mt_norm_exact(-x, sched).value == v;
    ok += good;
  }
  r.pass = ok == corpus.size();
  r.detail = std::to_string(ok) + "/" + std::to_string(corpus.size()) + " vectors, " + std::to_string(flips) +
             " sign patterns (tolerance: exact)";
  r.data["vectors"] = corpus.size();
  r.data["pass"] = ok;
  return r;
}

CriterionResult isometry(const AcceptanceConfig& cfg) {
  CriterionResult r{3, "isometry", true, "", {}, 0, 300};
  auto ctx = acceptance_context();
  Rng rng(cfg.seed ^ 0x1234);
  std::size_t ok = 0;
  const std::size_t n = 200;
  for (std::size_t t = 0; t < n; ++t) {
    auto rep = isometry_check(random_rational_vector(rng, 1, 8), ctx);
    if (rep.ok)
      ++ok;
    else if (r.data["failures"].size() < 5)
      r.data["failures"].push_back(to_json(rep));
  }
  r.pass = ok == n;
  r.detail = std::to_string(ok) + "/" + std::to_string(n) + " with ||x|| = ||Sx|| and both transfers valid (tolerance: exact)";
  r.data["records"] = ctx.records().size();
  r.data["equal"] = ok;
  return r;
}

KRecord planted(FinVector f, Formation form, int w, std::vector<RecordId> kids) {
  KRecord rec;
  rec.f = std::move(f);
  rec.formation = form;
  rec.weight_index = w;
  rec.children = std::move(kids);
  rec.generation = 1;
  return rec;
}

CriterionResult closure(const AcceptanceConfig&) {
  CriterionResult r{4, "closure suite", true, "", {}, 0, 600};
  auto ctx = acceptance_context();
  std::vector<ClosureReport> reps{check_K1(ctx), check_K2(ctx), check_K3(ctx)};
  bool clean = ctx.saturated();
  for (const auto& rep : reps) {
    clean = clean && rep.ok && rep.violation_count == 0;
    r.data[rep.name] = {{"checked", rep.checked}, {"violations", rep.violation_count}, {"structural", rep.structural}};
  }
  Rational q = make_rational(1, 4);
  auto e = [&](Index i) { return *ctx.find(FinVector::unit(i)); };
  int caught = 0;
  {
    auto c = ctx;
    c.admit(planted(FinVector{{1, make_rational(1, 3)}}, Formation::admitted, 0, {}));
    caught += !check_K1(c).ok;
  }
  {
    auto c = ctx;
    c.admit(planted(FinVector{{1, q}, {2, make_rational(1, 2)}}, Formation::regular, 2, {e(1), e(2)}));
    caught += !check_K2(c).ok;
  }
  {
    auto c = ctx;
    c.admit(planted(FinVector{{2, q}, {4, q}, {6, q}}, Formation::admitted, 0, {}));
    caught += !check_K3(c).ok;
  }
  {
    auto c = ctx;
    c.admit(planted(FinVector{{1, q}, {2, q}, {3, q}}, Formation::regular, 2, {e(1), e(2), e(3)}));
    caught += !check_K3(c).ok;
  }
  r.pass = clean && caught == 4;
  r.detail = std::to_string(ctx.records().size()) + " records, K1/K2/K3 violations " +
             std::to_string(reps[0].violation_count) + "/" + std::to_string(reps[1].violation_count) + "/" +
             std::to_string(reps[2].violation_count) + ", negative controls caught " + std::to_string(caught) + "/4";
  r.data["records"] = ctx.records().size();
  r.data["controlsCaught"] = caught;
  return r;
}

/// Lambda^k by unfolding: g in Lambda(h) iff g_{2i} = h_i for all i and supp g within 2 range(h).
bool unfolded_member(const FinVector& g, const FinVector& f, int k) {
  if (k == 0) return g == f;
  FinVector h = apply_R(g);
  if (h.is_zero() || !unfolded_member(h, f, k - 1)) return false;
  Interval e{2 * h.min_support(), 2 * h.max_support()};
  for (const auto& [i, v] : g) {
    if (!e.contains(i)) return false;
    if (i % 2 == 0 && v != h.get(i / 2)) return false;
  }
  return true;
}

CriterionResult lambda_suite(const AcceptanceConfig& cfg) {
  CriterionResult r{5, "Lambda suite", true, "", {}, 0, 300};
  Rng rng(cfg.seed ^ 0x7777);
  std::size_t cases = 0, agree = 0, trips = 0, trips_ok = 0, blocks = 0, blocks_ok = 0;
  for (int t = 0; t < 200; ++t) {
    FinVector f = random_rational_vector(rng, draw(rng, 1, 3), draw(rng, 3, 6));
    for (int k = 0; k <= 3; ++k) {
      FinVector lift = lambda_power_lift(f, k);
      Interval e = f.range()->scaled(Index(1) << k);
      std::vector<FinVector> candidates{lift};
      FinVector noisy = lift;
      if (k > 0) noisy.set(e.lo + 1, make_rational(draw(rng, 1, 5), 3));
      candidates.push_back(noisy);
      FinVector outside = lift;
      outside.set(e.hi + 1, 1);
      candidates.push_back(outside);
      FinVector moved = lift;
      moved.add(e.lo, 1);
      candidates.push_back(moved);
      const bool expected[] = {true, e.lo + 1 <= e.hi, false, false};
      for (std::size_t c = 0; k > 0 && c < candidates.size(); ++c) {
        ++cases;
        bool m = lambda_member(candidates[c], f, k);
        agree += m == unfolded_member(candidates[c], f, k) && m == expected[c];
      }
      for (int l = 0; l <= k; ++l) {
        ++trips;
        trips_ok += apply_R_pow(lift, l) == lambda_power_lift(f, k - l);
      }
    }
    std::vector<FinVector> seq;
    Index lo = 1;
    for (int i = 0; i < 3; ++i) {
      Index hi = lo + draw(rng, 0, 3);
      seq.push_back(random_rational_vector(rng, lo, hi));
      lo = hi + 1 + draw(rng, 0, 2);
    }
    for (int k = 0; k <= 3; ++k) {
      std::vector<FinVector> lifted;
      for (const auto& g : seq) lifted.push_back(lambda_power_lift(g, k));
      ++blocks;
      blocks_ok += is_block_sequence(lifted);
    }
  }
  r.pass = agree == cases && trips_ok == trips && blocks_ok == blocks;
  r.detail = "membership " + std::to_string(agree) + "/" + std::to_string(cases) + ", round trips " +
             std::to_string(trips_ok) + "/" + std::to_string(trips) + ", block preservation " +
             std::to_string(blocks_ok) + "/" + std::to_string(blocks) + " (tolerance: exact)";
  r.data = {{"membership", agree}, {"roundTrips", trips_ok}, {"blocks", blocks_ok}};
  return r;
}

CriterionResult gap_vector(const AcceptanceConfig&) {
  CriterionResult r{6, "strict-singularity gap", true, "", {}, 0, 60};
  auto sched = oracle_schedule();
  auto w = make_ss_witness(1, unit_blocks(), sched);
  Rational expected = Rational(sched.m(2)) / Rational(sched.n(2));
  bool valid = verify_certificate_structure(w.cert, sched).ok;
  r.pass = valid && w.lower >= 1 && w.sup_norm == expected;
  r.detail = "certified ||x|| >= " + to_string(w.lower) + ", ||x||_inf = " + to_string(w.sup_norm) +
             " = m_2/n_2 (tolerance: exact)";
  r.data = to_json(w);
  return r;
}

CriterionResult witness(const AcceptanceConfig& cfg) {
  CriterionResult r{7, "uncomplemented witness", true, "", {}, 0, 600};
  auto sched = ParameterSchedule::default_compact();
  SigmaRegistry reg;
  if (cfg.registry && std::filesystem::exists(*cfg.registry)) reg = SigmaRegistry::load(*cfg.registry);
  auto ds = build_dependent_sequence(1, unit_blocks(), sched, reg);
  auto clauses = verify_dependent_sequence(ds, sched, reg);
  auto w = complementation_witness(ds, sched);
  if (cfg.registry) reg.save(*cfg.registry);
  bool ok = ds.xs.size() == 4 && w.ok && w.sum_lower >= 1;
  std::string flagged;
  for (const auto& c : clauses) {
    if (c.ok) continue;
    if (c.caveat) {
      flagged += (flagged.empty() ? "" : ",") + c.name;
    } else {
      ok = false;
    }
  }
  r.pass = ok;
  std::ostringstream d;
  d << ds.xs.size() << " pairs, ||y+z|| >= " << to_string(w.sum_lower) << " (exact), ratio upper(||y-z||)/lower(||y+z||) = "
    << to_string(w.ratio) << " vs paper 240/m^2 = " << to_string(w.paper_reference)
    << " (reported); flagged at compact schedule: " << (flagged.empty() ? "none" : flagged);
  r.detail = d.str();
  r.data["sequence"] = to_json(ds, clauses);
  r.data["witness"] = to_json(w);
  return r;
}

using Runner = CriterionResult (*)(const AcceptanceConfig&);
constexpr Runner kRunners[] = {oracle_equivalence, sandwich, isometry, closure, lambda_suite, gap_vector, witness};
const char* const kNames[] = {"oracle equivalence", "sandwich and unconditionality", "isometry", "closure suite",
                              "Lambda suite", "strict-singularity gap", "uncomplemented witness"};

CriterionResult timed(int id, const AcceptanceConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = kRunners[id - 1](cfg);
  } catch (const std::exception& e) {
    r.id = id;
    r.name = kNames[id - 1];
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.limit_seconds > 0 && r.seconds > r.limit_seconds) {
    r.pass = false;
    r.detail += "; runtime over limit";
  }
  return r;
}

CriterionResult determinism(const AcceptanceConfig& cfg, const std::vector<CriterionResult>* first) {
  CriterionResult r{8, "determinism", true, "", {}, 0, 1200};
  std::vector<CriterionResult> a;
  if (first) {
    a = *first;
  } else {
    for (int id = 1; id <= 7; ++id) a.push_back(timed(id, cfg));
  }
  std::size_t same = 0;
  for (int id = 1; id <= 7; ++id)
    same += to_json(a[static_cast<std::size_t>(id - 1)]).dump() == to_json(timed(id, cfg)).dump();

  auto dir = std::filesystem::temp_directory_path() / ("gms_det_" + std::to_string(cfg.seed));
  std::filesystem::create_directories(dir);
  SigmaRegistry reg;
  build_dependent_sequence(1, unit_blocks(), ParameterSchedule::default_compact(), reg);
  reg.assign({FinVector::unit(3, make_rational(-7, 5))});
  reg.save(dir / "a.tsv");
  auto loaded = SigmaRegistry::load(dir / "a.tsv");
  loaded.save(dir / "b.tsv");
  auto bytes = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  bool reload = loaded == reg && bytes(dir / "a.tsv") == bytes(dir / "b.tsv");
  std::filesystem::remove_all(dir);
  r.pass = same == 7 && reload;
  r.detail = std::to_string(same) + "/7 criteria byte-identical on rerun, registry reload " +
             (reload ? "bit-exact" : "differs");
  r.data = {{"identical", same}, {"registryReload", reload}};
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceConfig& cfg) {
  if (id < 1 || id > 8) throw InvalidArgument("criterion id must be 1..8");
  if (id <= 7) return timed(id, cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto r = determinism(cfg, nullptr);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 7; ++id) out.push_back(timed(id, cfg));
  if (cfg.determinism) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = determinism(cfg, &out);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json to_json(const CriterionResult& r) {
  return {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"data", r.data}};
}

std::string summary_line(const CriterionResult& r, bool with_time) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name << ": " << r.detail;
  if (with_time) {
    s.setf(std::ios::fixed);
    s.precision(1);
    s << " [" << r.seconds << "s, limit " << r.limit_seconds << "s]";
  }
  return s.str();
}

}  // namespace gms
