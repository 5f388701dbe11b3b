#include "gms/constructions.hpp"
#include "gms/spread.hpp"

namespace gms {

namespace {

int range_exponent(Index hi) {
  int s = 1;
  while ((Index(1) << s) < hi) ++s;
  return s;
}

int least_separating_lift(const FinVector& x) {
  for (int k = 1; k < 62; ++k)
    if ((x.min_support() << k) > x.max_support()) return k;
  throw CapacityError("no spread separates the block within the index range");
}

TreeCertificate lift_certificate(TreeCertificate c, int k) {
  for (int i = 0; i < k; ++i) c = transfer_certificate_S(c);
  return c;
}

/// Some h in Lambda^k(f) has h(x) != 0: the canonical lift does, or x is
/// nonzero at a free coordinate of the lifted range.
bool lambda_touches(const FinVector& f, int k, const FinVector& x) {
  FinVector lift = lambda_power_lift(f, k);
  if (pair(lift, x) != 0) return true;
  Interval e = f.range()->scaled(Index(1) << k);
  Index step = Index(1) << k;
  for (const auto& [i, v] : x)
    if (e.contains(i) && i % step != 0) return true;
  return false;
}

}  // namespace

DependentSequence build_dependent_sequence(int j, const BlockFamily& family, const ParameterSchedule& sched,
                                           SigmaRegistry& registry, const KContext* ctx) {
  if (sched.mode() == ScheduleMode::conforming)
    throw CapacityError("conforming-infeasible: exact pairs need n_{j_1} > m_{j_1}^2 blocks with m_{j_1} > 9 n_" +
                        std::to_string(2 * j - 1) + "^2; use compact mode");
  Integer nn = sched.n(2 * j - 1);
  if (nn % 2 != 0) throw InvalidArgument("n_{2j-1} must be even");
  if (nn > 64) throw CapacityError("n_" + std::to_string(2 * j - 1) + " = " + nn.get_str() + " pairs exceed the budget");
  const int d = static_cast<int>(nn.get_si() / 2);

  DependentSequence ds;
  ds.j = j;
  Index lo = 2;
  int w = smallest_seed_index(j, sched);
  for (int i = 0; i < d; ++i) {
    if (i > 0) w = registry.assign(ds.fs);
    auto odd = make_stable_exact_pair(w, family, sched, lo, ctx, 3);
    int s = range_exponent(odd.x.max_support());
    int k = least_separating_lift(odd.x);
    if (i > 0) k = std::max(k, ds.ks.back() + ds.ss.back() + s + 1);
    FinVector x_even = apply_S_pow(odd.x, k);
    auto cert_even = lift_certificate(odd.cert, k);
    auto even = verify_exact_pair(x_even, cert_even, w, sched, ctx, 0);

    ds.js.push_back(w);
    ds.ks.push_back(k);
    ds.ss.push_back(s);
    for (auto* p : {&odd, &even}) {
      ds.xs.push_back(p->x);
      ds.fs.push_back(p->f);
      ds.certs.push_back(p->cert);
      ds.pairs.push_back(*p);
    }
    lo = x_even.max_support() + 1;
  }
  ds.special.kind = SpecialSequence::Kind::j_special;
  ds.special.j = j;
  ds.special.members = ds.fs;
  ds.special.member_certs = ds.certs;
  ds.special.k_list = ds.ks;
  for (int x : ds.js) {
    ds.special.weight_indices.push_back(x);
    ds.special.weight_indices.push_back(x);
  }
  return ds;
}

std::vector<ClauseStatus> verify_dependent_sequence(const DependentSequence& ds, const ParameterSchedule& sched,
                                                    const SigmaRegistry& registry, int k_cap) {
  std::vector<ClauseStatus> out;
  const std::size_t d = ds.js.size();
  const bool compact = sched.mode() == ScheduleMode::compact;
  if (ds.xs.size() != 2 * d || ds.fs.size() != 2 * d || ds.ks.size() != d || ds.ss.size() != d) {
    out.push_back({"shape", false, false, "sequence lengths disagree"});
    return out;
  }
  Integer n = sched.n(2 * ds.j - 1);

  ClauseStatus d1{"D1", true, false, ""};
  Integer m1 = sched.m(ds.js[0]);
  d1.ok = m1 > 9 * n * n;
  d1.detail = "m_" + std::to_string(ds.js[0]) + " = " + m1.get_str() + " vs 9 n^2 = " + Integer(9 * n * n).get_str();
  d1.caveat = !d1.ok && compact;
  out.push_back(d1);

  ClauseStatus d2{"D2", true, false, ""};
  if (Integer(2 * d) != n) {
    d2.ok = false;
    d2.detail = "length is not n_{2j-1}; ";
  }
  auto sp = verify_special(ds.special, sched, registry);
  for (const auto& v : sp.violations) d2.detail += v + "; ";
  d2.ok = d2.ok && sp.ok;
  for (std::size_t i = 0; i < d; ++i) {
    if (ds.js[i] % 2 != 0) {
      d2.ok = false;
      d2.detail += "j_" + std::to_string(i + 1) + " is odd; ";
    }
    for (std::size_t t : {2 * i, 2 * i + 1}) {
      if (ds.certs[t].is_terminal() || ds.certs[t].j != ds.js[i] || flatten(ds.certs[t], sched) != ds.fs[t]) {
        d2.ok = false;
        d2.detail += "f_" + std::to_string(t + 1) + " does not carry weight 1/m_" + std::to_string(ds.js[i]) + "; ";
      }
    }
  }
  out.push_back(d2);

  ClauseStatus d3{"D3", true, false, ""};
  for (std::size_t i = 0; i < d; ++i)
    if (ds.xs[2 * i + 1] != apply_S_pow(ds.xs[2 * i], ds.ks[i])) {
      d3.ok = false;
      d3.detail += "x_" + std::to_string(2 * i + 2) + " != S^k x_" + std::to_string(2 * i + 1) + "; ";
    }
  out.push_back(d3);

  ClauseStatus d4{"D4", true, false, ""};
  for (std::size_t t = 0; t < 2 * d; ++t) {
    auto w = verify_exact_pair(ds.xs[t], ds.certs[t], ds.js[t / 2], sched);
    if (!w.ok) {
      d4.ok = false;
      d4.detail += "pair " + std::to_string(t + 1) + ": " + w.failures.front() + "; ";
    }
  }
  out.push_back(d4);

  ClauseStatus d7{"D7", true, false, ""};
  for (std::size_t i = 0; i < d; ++i) {
    const auto& x = ds.xs[2 * i];
    if (x.min_support() < 2 || x.max_support() > (Index(1) << ds.ss[i])) {
      d7.ok = false;
      d7.detail += "range(x_" + std::to_string(2 * i + 1) + ") not in [2, 2^s]; ";
    }
    if (i + 1 < d && !(ds.ks[i] + ds.ss[i] < ds.ks[i + 1] - ds.ss[i + 1])) {
      d7.ok = false;
      d7.detail += "k_" + std::to_string(i + 1) + " + s_" + std::to_string(i + 1) + " >= k_" + std::to_string(i + 2) +
                   " - s_" + std::to_string(i + 2) + "; ";
    }
  }

  ClauseStatus d5{"D5", true, false, ""};
  if (k_cap < 0) k_cap = ds.ks.back() + ds.ss.back() + 2;
  for (int k = 0; k <= k_cap; ++k) {
    int touching = 0, images = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (lambda_touches(ds.fs[2 * i], k, ds.xs[2 * i + 1])) ++touching;
      if (pair(apply_R_pow(ds.fs[2 * i + 1], k), ds.xs[2 * i]) != 0) ++images;
    }
    if (touching > 1 || images > 1) {
      d5.ok = false;
      d5.detail += "k = " + std::to_string(k) + ": " + std::to_string(touching) + " Lambda and " +
                   std::to_string(images) + " R^k overlaps; ";
    }
  }
  d5.detail += "scanned k <= " + std::to_string(k_cap) + (d7.ok ? "; implied by D7" : "");
  out.push_back(d5);

  ClauseStatus d6{"D6", true, false, ""};
  Rational m2j1(sched.m(2 * ds.j - 1));
  Rational target = 1 / (m2j1 * m2j1);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    Rational lhs = 4 * sched.weight(ds.js[i + 1]) * Rational(static_cast<long>(ds.xs[2 * i].support_size()));
    if (!(lhs < target)) {
      d6.ok = false;
      d6.detail += "i = " + std::to_string(i + 1) + ": 4 #supp / m_" + std::to_string(ds.js[i + 1]) + " = " +
                   to_string(lhs) + " >= " + to_string(target) + "; ";
    }
  }
  d6.caveat = !d6.ok && compact && !d1.ok;
  if (d6.caveat) d6.detail += "derived from D1, which fails at this schedule";
  out.push_back(d6);
  out.push_back(d7);
  return out;
}

ComplementationWitness complementation_witness(const DependentSequence& ds, const ParameterSchedule& sched) {
  ComplementationWitness w;
  Integer n = sched.n(2 * ds.j - 1);
  Rational m(sched.m(2 * ds.j - 1));
  Rational c = m / Rational(n);
  for (std::size_t t = 0; t < ds.xs.size(); ++t) (t % 2 ? w.y : w.z) += ds.xs[t];
  w.y *= c;
  w.z *= c;
  for (const auto& [i, v] : w.y) {
    w.y_even = w.y_even && i % 2 == 0;
    w.disjoint = w.disjoint && w.z.get(i) == 0;
  }
  FinVector sum_f;
  for (const auto& f : ds.fs) sum_f += f;
  w.sum_cert = TreeCertificate::weighted(1, 2 * ds.j - 1, NodeTag::r_special, *sum_f.range(), ds.certs, 0);
  auto rep = verify_certificate_structure(w.sum_cert, sched);
  if (!rep.ok) w.caveats.push_back("sum certificate: " + rep.diagnostics.front());
  FinVector yz = w.y + w.z;
  w.sum_lower = evaluate_certificate(w.sum_cert, yz, sched);
  w.diff_upper = certified_upper(w.y - w.z, sched);
  w.ratio = w.diff_upper / w.sum_lower;
  w.paper_reference = Rational(240) / (m * m);
  w.ok = rep.ok && w.sum_lower >= 1 && w.y_even && w.disjoint;
  w.caveats.push_back("upper bound of ||y - z|| is the mixed Tsirelson norm (K lies in its norming set)");
  if (sched.mode() == ScheduleMode::compact)
    w.caveats.push_back("compact schedule: the paper's bound assumes the growth conditions on (m_j), (n_j)");
  return w;
}

nlohmann::json to_json(const ExactPairWitness& w) {
  nlohmann::json j;
  j["x"] = to_string(w.x);
  j["f"] = to_string(w.f);
  j["j"] = w.j;
  j["ok"] = w.ok;
  j["stable"] = w.stable;
  j["kChecked"] = w.k_checked;
  j["upper"] = to_string(w.upper);
  j["failures"] = w.failures;
  j["notes"] = w.notes;
  j["certificate"] = to_json(w.cert);
  return j;
}

nlohmann::json to_json(const DependentSequence& ds, const std::vector<ClauseStatus>& clauses) {
  nlohmann::json j;
  j["j"] = ds.j;
  j["js"] = ds.js;
  j["ks"] = ds.ks;
  j["ss"] = ds.ss;
  auto pairs = nlohmann::json::array();
  for (std::size_t t = 0; t < ds.xs.size(); ++t) {
    nlohmann::json p;
    p["x"] = to_string(ds.xs[t]);
    p["f"] = to_string(ds.fs[t]);
    p["certificate"] = to_json(ds.certs[t]);
    pairs.push_back(std::move(p));
  }
  j["pairs"] = std::move(pairs);
  auto cl = nlohmann::json::array();
  for (const auto& c : clauses) cl.push_back({{"name", c.name}, {"ok", c.ok}, {"caveat", c.caveat}, {"detail", c.detail}});
  j["clauses"] = std::move(cl);
  return j;
}

nlohmann::json to_json(const ComplementationWitness& w) {
  nlohmann::json j;
  j["y"] = to_string(w.y);
  j["z"] = to_string(w.z);
  j["sumLower"] = to_string(w.sum_lower);
  j["diffUpper"] = to_string(w.diff_upper);
  j["ratio"] = to_string(w.ratio);
  j["paperReference"] = to_string(w.paper_reference);
  j["yEven"] = w.y_even;
  j["disjoint"] = w.disjoint;
  j["ok"] = w.ok;
  j["caveats"] = w.caveats;
  j["sumCertificate"] = to_json(w.sum_cert);
  return j;
}

nlohmann::json to_json(const SSWitness& w) {
  nlohmann::json j;
  j["x"] = to_string(w.x);
  j["lower"] = to_string(w.lower);
  j["supNorm"] = to_string(w.sup_norm);
  j["ratio"] = to_string(w.ratio);
  j["certificate"] = to_json(w.cert);
  return j;
}

}  // namespace gms
