#include "gms/engine.hpp"

#include "gms/mt_norm.hpp"
#include "gms/spread.hpp"

namespace gms {

namespace {

constexpr std::size_t kMtSupportLimit = 48;

struct Best {
  bool found = false;
  Rational value;
  int depth = 0;
  RecordId id = 0;
  int sign = 1;
};

Best scan(const FinVector& x, const KContext& ctx, int depth_cap) {
  Best best;
  std::vector<std::pair<RecordId, int>> tied;
  const auto& recs = ctx.records();
  for (RecordId id = 0; id < recs.size(); ++id) {
    const auto& rec = recs[id];
    if (depth_cap >= 0 && rec.depth > depth_cap) continue;
    Rational v = pair(rec.f, x);
    int s = v < 0 ? -1 : 1;
    Rational a = abs(v);
    if (!best.found || a > best.value || (a == best.value && rec.depth < best.depth)) {
      best = {true, a, rec.depth, id, s};
      tied.clear();
    } else if (a == best.value && rec.depth == best.depth) {
      tied.emplace_back(id, s);
    }
  }
  if (!tied.empty()) {
    std::string key = serialize(ctx.certificate(best.id));
    for (auto [id, s] : tied) {
      std::string other = serialize(ctx.certificate(id));
      if (other < key) {
        key = std::move(other);
        best.id = id;
        best.sign = s;
      }
    }
  }
  return best;
}

TreeCertificate signed_certificate(const KContext& ctx, RecordId id, int s, RecordId& out) {
  out = id;
  if (s > 0) return ctx.certificate(id);
  if (auto neg = ctx.find(-ctx.record(id).f)) {
    out = *neg;
    return ctx.certificate(*neg);
  }
  auto c = ctx.certificate(id);
  c.sign = -c.sign;
  return c;
}

}  // namespace

LowerBound gm_norm_lower(const FinVector& x, const KContext& ctx) {
  if (ctx.records().empty()) throw InvalidArgument("gm_norm_lower: empty context");
  Best b = scan(x, ctx, -1);
  LowerBound out;
  out.value = b.value;
  out.certificate = signed_certificate(ctx, b.id, b.sign, out.record);
  return out;
}

NormBracket gm_norm_bracket(const FinVector& x, const KContext& ctx, int depth_cap) {
  if (depth_cap < 0) throw InvalidArgument("depth cap must be >= 0");
  NormBracket b;
  auto low = gm_norm_lower(x, ctx);
  b.lower = low.value;
  b.lower_cert = std::move(low.certificate);
  b.depth_cap = depth_cap;
  b.enumerated = scan(x, ctx, depth_cap).value;
  Rational l1 = norm_one(x);
  Rational tail(1);
  tail /= Rational(Integer(1) << depth_cap);
  b.upper = b.enumerated + tail * l1;

  const auto& caps = ctx.caps();
  if (!ctx.saturated()) b.caveats.push_back("context-not-saturated");
  if (ctx.generations_built() < depth_cap)
    b.caveats.push_back("generation " + std::to_string(ctx.generations_built()) + " below depth cap " +
                        std::to_string(depth_cap));
  if (!x.is_zero() && x.max_support() > caps.window)
    b.caveats.push_back("support of x exceeds window " + std::to_string(caps.window));
  b.caveats.push_back("registry-relative: " + std::to_string(ctx.sequences().size()) +
                      " registered special sequence(s)");
  b.caveats.push_back("capped: support size <= " + std::to_string(caps.max_support_size) + ", arity <= " +
                      std::to_string(caps.arity_cap));
  b.caveats.push_back("mode: " + to_string(ctx.schedule().mode()));

  if (x.is_zero()) {
    b.certified_upper = Rational(0);
  } else if (x.support_size() <= kMtSupportLimit) {
    Rational cu = mt_norm_exact(x, ctx.schedule()).value;
    b.certified_upper = cu < l1 ? cu : l1;
  } else {
    b.certified_upper = l1;
  }
  return b;
}

nlohmann::json to_json(const NormBracket& b) {
  nlohmann::json j;
  j["lower"] = to_string(b.lower);
  j["upper"] = to_string(b.upper);
  j["depthCap"] = b.depth_cap;
  j["enumerated"] = to_string(b.enumerated);
  if (b.certified_upper) j["certifiedUpper"] = to_string(*b.certified_upper);
  j["caveats"] = b.caveats;
  j["certificate"] = to_json(b.lower_cert);
  return j;
}

TreeCertificate transfer_certificate_S(const TreeCertificate& c) {
  if (c.is_terminal()) {
    if (c.index > (std::numeric_limits<Index>::max() >> 1)) throw CapacityError("index overflow in S-transfer");
    return TreeCertificate::terminal(c.sign, 2 * c.index);
  }
  Interval e = c.restriction.scaled(2);
  if (c.tag == NodeTag::r_special && c.k >= 1)
    return TreeCertificate::weighted(c.sign, c.j, NodeTag::r_special, e, c.children, c.k - 1);
  std::vector<TreeCertificate> kids;
  kids.reserve(c.children.size());
  for (const auto& ch : c.children) kids.push_back(transfer_certificate_S(ch));
  NodeTag tag = c.tag == NodeTag::regular ? NodeTag::regular : NodeTag::lambda_special;
  return TreeCertificate::weighted(c.sign, c.j, tag, e, std::move(kids));
}

TreeCertificate transfer_certificate_S(const TreeCertificate& c, const KContext& ctx) {
  auto g = transfer_certificate_S(c);
  FinVector h = flatten(g, ctx.schedule());
  if (!ctx.within_caps(h))
    throw CapacityError("S-transfer " + to_string(h) + " leaves the context caps");
  return g;
}

TreeCertificate transfer_certificate_R(const TreeCertificate& g) {
  if (g.is_terminal()) {
    if (g.index % 2 != 0) return TreeCertificate::zero();
    return TreeCertificate::terminal(g.sign, g.index / 2);
  }
  auto e = r_interval_image(g.restriction);
  if (!e || g.children.empty()) return TreeCertificate::zero(g.j);
  if (g.tag == NodeTag::r_special)
    return TreeCertificate::weighted(g.sign, g.j, NodeTag::r_special, *e, g.children, g.k + 1);
  std::vector<TreeCertificate> kids;
  for (const auto& ch : g.children) {
    auto r = transfer_certificate_R(ch);
    if (!r.is_zero_node()) kids.push_back(std::move(r));
  }
  if (kids.empty()) return TreeCertificate::zero(g.j);
  return TreeCertificate::weighted(g.sign, g.j, g.tag, *e, std::move(kids));
}

IsometryReport isometry_check(const FinVector& x, const KContext& ctx) {
  const auto& sched = ctx.schedule();
  IsometryReport r;
  r.x = x;
  FinVector sx = apply_S(x);
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.diagnostics.push_back(std::move(msg));
  };
  auto lx = gm_norm_lower(x, ctx);
  auto lsx = gm_norm_lower(sx, ctx);
  r.norm_x = lx.value;
  r.norm_sx = lsx.value;
  r.cert_x = lx.certificate;
  r.cert_sx = lsx.certificate;
  if (r.norm_x != r.norm_sx) fail("norms differ: " + to_string(r.norm_x) + " vs " + to_string(r.norm_sx));

  r.lifted = transfer_certificate_S(r.cert_x);
  if (auto rep = verify_certificate_structure(r.lifted, sched); !rep.ok) fail("S-transfer: " + rep.diagnostics.front());
  r.lifted_value = evaluate_certificate(r.lifted, sx, sched);
  FinVector lf = flatten(r.lifted, sched);
  if (r.lifted_value != r.norm_x) fail("S-transfer value " + to_string(r.lifted_value));
  if (apply_R(lf) != flatten(r.cert_x, sched)) fail("S-transfer is not an R-preimage");
  if (ctx.within_caps(lf) && !ctx.contains(lf)) fail("S-transfer " + to_string(lf) + " not in context");

  r.pulled = transfer_certificate_R(r.cert_sx);
  if (auto rep = verify_certificate_structure(r.pulled, sched); !rep.ok) fail("R-transfer: " + rep.diagnostics.front());
  r.pulled_value = evaluate_certificate(r.pulled, x, sched);
  FinVector pf = flatten(r.pulled, sched);
  if (r.pulled_value != r.norm_sx) fail("R-transfer value " + to_string(r.pulled_value));
  if (pf != apply_R(flatten(r.cert_sx, sched))) fail("R-transfer is not the R-image");
  if (!pf.is_zero() && !ctx.contains(pf)) fail("R-transfer " + to_string(pf) + " not in context");
  return r;
}

nlohmann::json to_json(const IsometryReport& r) {
  nlohmann::json j;
  j["x"] = to_string(r.x);
  j["normX"] = to_string(r.norm_x);
  j["normSx"] = to_string(r.norm_sx);
  j["certX"] = to_json(r.cert_x);
  j["certSx"] = to_json(r.cert_sx);
  j["liftedValue"] = to_string(r.lifted_value);
  j["pulledValue"] = to_string(r.pulled_value);
  j["ok"] = r.ok;
  j["diagnostics"] = r.diagnostics;
  return j;
}

}  // namespace gms
