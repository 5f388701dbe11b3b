#include "gms/constructions.hpp"

#include "gms/mt_norm.hpp"
#include "gms/spread.hpp"

namespace gms {

namespace {

constexpr std::size_t kMtCompressLimit = 200;
constexpr long kMaxBlocks = 1'000'000;

long to_count(const Integer& n, const std::string& what) {
  if (n > kMaxBlocks) throw CapacityError(what + " = " + n.get_str() + " blocks exceeds the block budget");
  return n.get_si();
}

Rational weight_of(const KRecord& rec, const ParameterSchedule& sched) { return sched.weight(rec.weight_index); }

FinVector scaled(FinVector v, const Rational& c) {
  v *= c;
  return v;
}

}  // namespace

BlockFamily unit_blocks() {
  BlockFamily fam;
  fam.name = "unit";
  fam.next = [](Index lo) {
    Index i = lo < 1 ? 1 : lo;
    return NormedBlock{FinVector::unit(i), FinVector::unit(i), TreeCertificate::terminal(1, i)};
  };
  return fam;
}

std::vector<NormedBlock> take_blocks(const BlockFamily& family, Index lo, std::size_t count) {
  std::vector<NormedBlock> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    auto b = family.next(lo);
    if (b.x.is_zero() || b.x.min_support() < lo) throw InvalidArgument("block family returned a misplaced block");
    lo = b.x.max_support() + 1;
    out.push_back(std::move(b));
  }
  return out;
}

Rational certified_upper(const FinVector& x, const ParameterSchedule& sched) {
  Rational l1 = norm_one(x);
  if (x.is_zero() || x.support_size() > kMtCompressLimit) return l1;
  FinVector c;
  Index rank = 0;
  for (const auto& [i, v] : x) c.set(++rank, v);
  Rational mt = mt_norm_exact(c, sched).value;
  return mt < l1 ? mt : l1;
}

L1AverageWitness find_l1_average(const BlockFamily& basis, long N, const Rational& C, const Rational& eps,
                                 const KContext& ctx, std::size_t block_budget) {
  if (N < 1) throw InvalidArgument("l1 average needs N >= 1");
  const auto& sched = ctx.schedule();
  for (std::size_t L = 1; static_cast<std::size_t>(N) * L <= block_budget; L *= 2) {
    auto blocks = take_blocks(basis, 1, static_cast<std::size_t>(N) * L);
    std::vector<FinVector> raw(static_cast<std::size_t>(N));
    FinVector y;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      raw[b / L] += blocks[b].x;
      y += blocks[b].x;
    }
    if (y.max_support() > ctx.caps().window) break;
    auto low = gm_norm_lower(y, ctx);
    if (low.value == 0) continue;
    L1AverageWitness w;
    w.N = N;
    w.C = C;
    w.chunk = L;
    w.x = scaled(y, 1 / low.value);
    bool good = norm_infty(w.x) < eps;
    for (const auto& p : raw) {
      w.parts.push_back(scaled(p, Rational(N) / low.value));
      good = good && certified_upper(w.parts.back(), sched) <= C;
    }
    if (!good) continue;
    w.cert = low.certificate;
    w.lower = evaluate_certificate(w.cert, w.x, sched);
    w.upper = certified_upper(w.x, sched);
    return w;
  }
  throw CapacityError("find_l1_average: no average found within the block budget");
}

SweepReport verify_av_est(const FinVector& x, int j, const KContext& ctx) {
  SweepReport r;
  const auto& sched = ctx.schedule();
  Rational bound = sched.weight(j);
  for (const auto& rec : ctx.records()) {
    if (rec.formation == Formation::terminal) continue;
    Rational w = weight_of(rec, sched);
    if (!(w > bound)) continue;
    ++r.checked;
    Rational slack = 3 * w - abs(pair(rec.f, x));
    if (!r.margin || slack < *r.margin) r.margin = slack;
    if (slack < 0) {
      r.ok = false;
      if (r.violations.size() < 20) r.violations.push_back("|f(x)| > 3 w(f) for f = " + to_string(rec.f));
    }
  }
  return r;
}

SSWitness make_ss_witness(int j, const BlockFamily& basis, const ParameterSchedule& sched) {
  if (j < 1) throw InvalidArgument("j must be >= 1");
  long n = to_count(sched.n(2 * j), "n_" + std::to_string(2 * j));
  if (n < 2) throw InvalidArgument("the gap vector needs n_{2j} >= 2 blocks");
  Rational m(sched.m(2 * j));
  auto blocks = take_blocks(basis, 1, static_cast<std::size_t>(n));
  SSWitness w;
  std::vector<TreeCertificate> kids;
  Rational max_sup = 0;
  for (const auto& b : blocks) {
    w.x += b.x;
    kids.push_back(b.cert);
    Rational s = norm_infty(b.x);
    if (s > max_sup) max_sup = s;
  }
  w.ratio = m / Rational(n);
  w.x *= w.ratio;
  w.cert = TreeCertificate::weighted(1, 2 * j, NodeTag::regular, *w.x.range(), std::move(kids));
  w.lower = evaluate_certificate(w.cert, w.x, sched);
  w.sup_norm = norm_infty(w.x);
  if (w.sup_norm != w.ratio * max_sup) throw Error("gap vector sup norm mismatch");
  return w;
}

RISReport verify_ris(const std::vector<FinVector>& xs, const Rational& C, const Rational& eps,
                     const std::vector<int>& js, const KContext& ctx, int k_cap) {
  RISReport r;
  r.checked_generation = ctx.generations_built();
  const auto& sched = ctx.schedule();
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.failures.push_back(std::move(msg));
  };
  if (js.size() != xs.size()) {
    fail("need one weight index per vector");
    return r;
  }
  for (std::size_t i = 1; i < js.size(); ++i)
    if (js[i] <= js[i - 1]) fail("weight indices are not strictly increasing");
  if (!is_block_sequence(xs)) fail("vectors are not a block sequence");
  for (int k = 0; k <= k_cap; ++k) {
    std::string tag = k == 0 ? "" : " (S^" + std::to_string(k) + ")";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      FinVector y = apply_S_pow(xs[i], k);
      std::string at = "x_" + std::to_string(i + 1) + tag;
      if (certified_upper(y, sched) > C) fail("(1) upper bound of ||" + at + "|| exceeds C");
      if (!(norm_infty(y) < eps)) fail("(1) ||" + at + "||_inf >= eps");
      if (i + 1 < xs.size() && !(2 * sched.weight(js[i + 1]) * Rational(static_cast<long>(y.support_size())) < eps))
        fail("(2) 2 #supp(" + at + ") / m_" + std::to_string(js[i + 1]) + " >= eps");
      Rational bound = sched.weight(js[i]);
      for (const auto& rec : ctx.records()) {
        if (rec.formation == Formation::terminal) continue;
        Rational w = weight_of(rec, sched);
        if (w > bound && abs(pair(rec.f, y)) > C * w) {
          fail("(3) |f(" + at + ")| > C w(f) for f = " + to_string(rec.f));
          break;
        }
      }
    }
    r.stability_checked = k;
  }
  return r;
}

BasicInequalityReport check_basic_inequality(const std::vector<FinVector>& xs, const Rational& C, int j,
                                             const KContext& ctx) {
  const auto& sched = ctx.schedule();
  BasicInequalityReport r;
  FinVector v;
  for (const auto& x : xs) v += x;
  v *= 1 / Rational(sched.n(j));
  r.lower = norm_infty(v);
  if (!ctx.records().empty()) {
    Rational l = gm_norm_lower(v, ctx).value;
    if (l > r.lower) r.lower = l;
  }
  r.upper = certified_upper(v, sched);
  r.consistent = r.lower <= r.upper;
  Rational m(sched.m(j));
  r.bound_2c = 2 * C / m;
  r.within_2c = r.upper <= r.bound_2c;
  bool hyp = true;
  for (const auto& rec : ctx.records()) {
    for (std::size_t a = 0; a < xs.size() && hyp; ++a) {
      FinVector s;
      for (std::size_t b = a; b < xs.size(); ++b) {
        s += xs[b];
        if (abs(pair(rec.f, s)) > C) {
          hyp = false;
          break;
        }
      }
    }
    if (!hyp) break;
  }
  if (hyp) {
    r.bound_4c = 4 * C / (m * m);
    r.notes.push_back("interval hypothesis verified over context generation " +
                      std::to_string(ctx.generations_built()));
  } else {
    r.notes.push_back("interval hypothesis fails in context; only the 2C/m_j bound applies");
  }
  r.notes.push_back(r.within_2c ? "upper bound within 2C/m_j" : "upper bound exceeds 2C/m_j");
  return r;
}

namespace {

void check_pair_clauses(const FinVector& x, const TreeCertificate& cert, int j, const ParameterSchedule& sched,
                        const KContext* ctx, const std::string& label, ExactPairWitness& w) {
  auto fail = [&](std::string msg) {
    w.ok = false;
    w.failures.push_back(label + msg);
  };
  auto rep = verify_certificate_structure(cert, sched);
  if (!rep.ok) {
    fail("certificate: " + rep.diagnostics.front());
    return;
  }
  Rational inv_m = sched.weight(j);
  if (cert.is_terminal() || cert.j != j) fail("(1) w(f) != 1/m_" + std::to_string(j));
  FinVector f = flatten(cert, sched);
  Rational lower = evaluate_certificate(cert, x, sched);
  Rational upper = certified_upper(x, sched);
  if (label.empty()) w.upper = upper;
  if (lower < 1) fail("(2) certified lower bound " + to_string(lower) + " < 1");
  if (upper > 6) fail("(2) certified upper bound " + to_string(upper) + " > 6");
  if (!(norm_infty(x) < inv_m)) fail("(2) ||x||_inf >= 1/m_" + std::to_string(j));
  if (pair(f, x) != 1) fail("(3) f(x) = " + to_string(pair(f, x)));
  if (f.range() != x.range()) fail("(3) range(f) != range(x)");
  Rational l1 = norm_one(x);
  if (l1 <= 9) {
    if (label.empty()) w.notes.push_back("(4) holds on all of K: ||x||_1 = " + to_string(l1) + " <= 9");
    return;
  }
  if (!ctx) {
    fail("(4) unverified: ||x||_1 > 9 and no context");
    return;
  }
  for (const auto& rec : ctx->records()) {
    if (rec.formation == Formation::terminal) continue;
    Rational wh = sched.weight(rec.weight_index);
    if (wh == inv_m) continue;
    Rational bound = 9 * (wh > inv_m ? wh : inv_m);
    if (abs(pair(rec.f, x)) > bound) {
      fail("(4) |h(x)| > 9 max(1/m_j, w(h)) for h = " + to_string(rec.f));
      return;
    }
  }
  if (label.empty())
    w.notes.push_back("(4) checked over context generation " + std::to_string(ctx->generations_built()));
}

}  // namespace

ExactPairWitness verify_exact_pair(const FinVector& x, const TreeCertificate& cert, int j,
                                   const ParameterSchedule& sched, const KContext* ctx, int k_cap) {
  ExactPairWitness w;
  w.x = x;
  w.cert = cert;
  w.j = j;
  w.f = flatten(cert, sched);
  check_pair_clauses(x, cert, j, sched, ctx, "", w);
  bool base_ok = w.ok;
  TreeCertificate lifted = cert;
  for (int k = 1; k <= k_cap; ++k) {
    lifted = transfer_certificate_S(lifted);
    FinVector xk = apply_S_pow(x, k);
    check_pair_clauses(xk, lifted, j, sched, ctx, "S^" + std::to_string(k) + ": ", w);
    if (ctx) {
      for (RecordId id = 0; id < ctx->records().size(); ++id) {
        const auto& rec = ctx->record(id);
        if (rec.formation == Formation::terminal || rec.weight_index != j) continue;
        if (!lambda_member(rec.f, w.f, k)) continue;
        check_pair_clauses(xk, ctx->certificate(id), j, sched, ctx, "S^" + std::to_string(k) + " (context): ", w);
      }
    }
    w.k_checked = k;
  }
  w.stable = w.ok;
  w.ok = base_ok;
  return w;
}

ExactPairWitness make_stable_exact_pair(int j, const BlockFamily& basis, const ParameterSchedule& sched, Index lo,
                                        const KContext* ctx, int k_cap) {
  long n = to_count(sched.n(j), "n_" + std::to_string(j));
  Rational m(sched.m(j));
  auto blocks = take_blocks(basis, lo, static_cast<std::size_t>(n));
  FinVector x;
  std::vector<TreeCertificate> kids;
  for (const auto& b : blocks) {
    x += b.x;
    kids.push_back(b.cert);
  }
  x *= m / Rational(n);
  auto cert = TreeCertificate::weighted(1, j, NodeTag::regular, *x.range(), std::move(kids));
  return verify_exact_pair(x, cert, j, sched, ctx, k_cap);
}

}  // namespace gms
