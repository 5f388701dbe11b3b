#include <algorithm>

#include "gms/kset.hpp"
#include "gms/spread.hpp"

namespace gms {

namespace {

constexpr std::size_t kShownViolations = 20;

void violation(ClosureReport& r, const std::string& msg) {
  r.ok = false;
  ++r.violation_count;
  if (r.violations.size() < kShownViolations) r.violations.push_back(msg);
}

bool skip_unsaturated(const KContext& ctx, ClosureReport& r) {
  if (!ctx.budget_exhausted()) return false;
  r.caveats.push_back("context is not saturated (record budget exhausted); closure assertions skipped");
  return true;
}

class LiftChecker {
 public:
  LiftChecker(const KContext& ctx, ClosureReport& report) : ctx_(ctx), r_(report) {}

  /// Some h in K with Rh = f, built as in the (K3) proof.
  bool lift_ok(RecordId id) {
    const auto& rec = ctx_.record(id);
    const auto& sched = ctx_.schedule();
    FinVector h;
    switch (rec.formation) {
      case Formation::terminal:
      case Formation::regular:
      case Formation::admitted: h = apply_S(rec.f); break;
      case Formation::r_special:
      case Formation::lambda_special: {
        const auto& model = ctx_.sequences().at(static_cast<std::size_t>(rec.sequence));
        FinVector sum;
        if (rec.formation == Formation::r_special && rec.k >= 1) {
          sum = apply_R_pow(model.sum(), rec.k - 1);
        } else {
          int lift = rec.formation == Formation::r_special ? 1 : rec.k + 1;
          for (const auto& f : model.members) sum += lambda_power_lift(f, lift);
        }
        h = restrict(sum, rec.restriction.scaled(2));
        h *= sched.weight(model.special_weight_index()) * rec.sign;
        break;
      }
    }
    if (apply_R(h) != rec.f) {
      violation(r_, "K3 backward: constructed lift does not map onto " + to_string(rec.f));
      return false;
    }
    if (ctx_.within_caps(h)) {
      if (ctx_.contains(h)) return true;
      violation(r_, "K3 backward: lift " + to_string(h) + " of " + to_string(rec.f) + " is missing");
      return false;
    }
    ++r_.structural;
    switch (rec.formation) {
      case Formation::terminal: return true;
      case Formation::regular: {
        bool ok = true;
        for (RecordId c : rec.children) ok = lift_ok(c) && ok;
        return ok;
      }
      case Formation::r_special:
        if (rec.k >= 1) return true;
        [[fallthrough]];
      case Formation::lambda_special: {
        const auto& model = ctx_.sequences().at(static_cast<std::size_t>(rec.sequence));
        auto members = ctx_.special_members(rec);
        bool ok = true;
        for (std::size_t i = 0; i < members.size(); ++i) {
          auto mid = ctx_.find(members[i], model.weight_indices[i]);
          if (!mid) {
            violation(r_, "K3 backward: member " + to_string(members[i]) + " is not in K");
            ok = false;
          } else {
            ok = lift_ok(*mid) && ok;
          }
        }
        return ok;
      }
      case Formation::admitted: break;
    }
    violation(r_, "K3 backward: no formation to lift outside the caps for " + to_string(rec.f));
    return false;
  }

 private:
  const KContext& ctx_;
  ClosureReport& r_;
};

void check_regular(const KContext& ctx, RecordId id, ClosureReport& r) {
  const auto& rec = ctx.record(id);
  const auto& caps = ctx.caps();
  if (rec.children.empty()) {
    violation(r, "K2: regular " + to_string(rec.f) + " has no children");
    return;
  }
  long arity = std::min(caps.arity_cap, ctx.schedule().arity(rec.weight_index, caps.arity_cap));
  if (static_cast<long>(rec.children.size()) > arity)
    violation(r, "K2: regular " + to_string(rec.f) + " exceeds arity " + std::to_string(arity));
  if (std::find(caps.regular_weights.begin(), caps.regular_weights.end(), rec.weight_index) ==
      caps.regular_weights.end())
    violation(r, "K2: regular " + to_string(rec.f) + " uses unregistered weight index " +
                     std::to_string(rec.weight_index));
  std::vector<FinVector> kids;
  for (RecordId c : rec.children) {
    if (c >= ctx.records().size() || ctx.record(c).generation >= rec.generation) {
      violation(r, "K2: regular " + to_string(rec.f) + " has a child outside earlier generations");
      return;
    }
    kids.push_back(ctx.record(c).f);
  }
  if (!is_block_sequence(kids)) violation(r, "K2: children of " + to_string(rec.f) + " are not a block sequence");
}

void check_special(const KContext& ctx, RecordId id, ClosureReport& r) {
  const auto& rec = ctx.record(id);
  if (rec.sequence < 0 || rec.sequence >= static_cast<int>(ctx.sequences().size())) {
    violation(r, "K2: special " + to_string(rec.f) + " names no registered sequence");
    return;
  }
  const auto& model = ctx.sequences()[static_cast<std::size_t>(rec.sequence)];
  auto rep = verify_special(model, ctx.schedule(), ctx.registry());
  for (const auto& v : rep.violations) violation(r, "K2: model of " + to_string(rec.f) + ": " + v);
  if (rec.formation == Formation::lambda_special) {
    auto g = build_lambda_special(model, rec.k, ctx.schedule());
    auto lrep = verify_lambda_special(g, model, ctx.schedule());
    for (const auto& v : lrep.violations) violation(r, "K2: Lambda sequence of " + to_string(rec.f) + ": " + v);
  }
  auto members = ctx.special_members(rec);
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto mid = ctx.find(members[i], model.weight_indices[i]);
    if (!mid || ctx.record(*mid).generation >= rec.generation)
      violation(r, "K2: member " + to_string(members[i]) + " of " + to_string(rec.f) +
                       " is not in an earlier generation");
  }
  if (rec.weight_index != model.special_weight_index())
    violation(r, "K2: special " + to_string(rec.f) + " has weight index " + std::to_string(rec.weight_index));
}

}  // namespace

ClosureReport check_K1(const KContext& ctx) {
  ClosureReport r;
  r.name = "K1";
  if (skip_unsaturated(ctx, r)) return r;
  for (const auto& rec : ctx.records()) {
    ++r.checked;
    FinVector neg = -rec.f;
    if (!ctx.contains(neg)) violation(r, "K1: -f missing for f = " + to_string(rec.f));
    std::vector<Index> pos;
    for (const auto& [i, v] : rec.f) pos.push_back(i);
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t b = a; b < pos.size(); ++b) {
        if (a == 0 && b + 1 == pos.size()) continue;
        FinVector cut = restrict(rec.f, Interval{pos[a], pos[b]});
        if (!ctx.contains(cut))
          violation(r, "K1: restriction to [" + std::to_string(pos[a]) + "," + std::to_string(pos[b]) +
                           "] missing for f = " + to_string(rec.f));
      }
  }
  return r;
}

ClosureReport check_K2(const KContext& ctx) {
  ClosureReport r;
  r.name = "K2";
  for (RecordId id = 0; id < ctx.records().size(); ++id) {
    const auto& rec = ctx.record(id);
    ++r.checked;
    switch (rec.formation) {
      case Formation::terminal:
        if (rec.generation != 0) violation(r, "K2: terminal " + to_string(rec.f) + " outside generation 0");
        break;
      case Formation::regular: check_regular(ctx, id, r); break;
      case Formation::r_special:
      case Formation::lambda_special: check_special(ctx, id, r); break;
      case Formation::admitted:
        violation(r, "K2: " + to_string(rec.f) + " was admitted without a formation");
        continue;
    }
    if (ctx.reconstruct(id) != rec.f) {
      violation(r, "K2: formation does not rebuild " + to_string(rec.f));
      continue;
    }
    try {
      auto cert = ctx.certificate(id);
      auto rep = verify_certificate_structure(cert, ctx.schedule());
      if (!rep.ok)
        violation(r, "K2: certificate of " + to_string(rec.f) + ": " + rep.diagnostics.front());
      else if (flatten(cert, ctx.schedule()) != rec.f)
        violation(r, "K2: certificate of " + to_string(rec.f) + " flattens to a different functional");
    } catch (const Error& e) {
      violation(r, "K2: certificate of " + to_string(rec.f) + ": " + e.what());
    }
  }
  return r;
}

ClosureReport check_K3(const KContext& ctx) {
  ClosureReport r;
  r.name = "K3";
  if (skip_unsaturated(ctx, r)) return r;
  LiftChecker lifts(ctx, r);
  for (RecordId id = 0; id < ctx.records().size(); ++id) {
    const auto& rec = ctx.record(id);
    ++r.checked;
    FinVector image = apply_R(rec.f);
    if (!image.is_zero() && !ctx.contains(image))
      violation(r, "K3 forward: R f = " + to_string(image) + " missing for f = " + to_string(rec.f));
    lifts.lift_ok(id);
  }
  return r;
}

}  // namespace gms
