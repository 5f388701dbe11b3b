#include "gms/kset.hpp"

#include <algorithm>

#include "gms/spread.hpp"

namespace gms {

std::string to_string(Formation f) {
  switch (f) {
    case Formation::terminal: return "terminal";
    case Formation::regular: return "regular";
    case Formation::r_special: return "r_special";
    case Formation::lambda_special: return "lambda_special";
    case Formation::admitted: return "admitted";
  }
  return "admitted";
}

namespace {

std::string record_key(const FinVector& f, int weight_index) {
  return to_string(f) + "#" + std::to_string(weight_index);
}

std::vector<Index> positions(const FinVector& f) {
  std::vector<Index> p;
  for (const auto& [i, v] : f) p.push_back(i);
  return p;
}

}  // namespace

KContext::KContext(ParameterSchedule sched, KCaps caps, SigmaRegistry registry)
    : sched_(std::move(sched)), caps_(std::move(caps)), registry_(std::move(registry)) {
  if (caps_.generation_cap < 0) throw InvalidArgument("generation cap must be >= 0");
  if (caps_.window < 1) throw InvalidArgument("support cap must be >= 1");
  if (caps_.max_support_size < 1) throw InvalidArgument("support size cap must be >= 1");
  if (caps_.arity_cap < 1) throw InvalidArgument("arity cap must be >= 1");
  for (int w : caps_.regular_weights)
    if (w < 1) throw InvalidArgument("regular weight index must be >= 1");
}

int KContext::add_sequence(SpecialSequence model) {
  if (built_ >= 0) throw InvalidArgument("sequences must be registered before generation");
  if (model.kind != SpecialSequence::Kind::j_special) throw InvalidArgument("only j-special models are registered");
  sequences_.push_back(std::move(model));
  return static_cast<int>(sequences_.size() - 1);
}

std::optional<RecordId> KContext::insert(KRecord rec) {
  std::string key = record_key(rec.f, rec.weight_index);
  if (by_key_.count(key)) return std::nullopt;
  if (records_.size() >= caps_.record_budget) {
    saturated_ = false;
    return std::nullopt;
  }
  auto id = static_cast<RecordId>(records_.size());
  by_key_.emplace(std::move(key), id);
  by_functional_.emplace(to_string(rec.f), id);
  records_.push_back(std::move(rec));
  return id;
}

RecordId KContext::admit(KRecord rec) {
  admitted_ = true;
  std::string key = record_key(rec.f, rec.weight_index);
  if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
  auto id = static_cast<RecordId>(records_.size());
  by_key_.emplace(std::move(key), id);
  by_functional_.emplace(to_string(rec.f), id);
  records_.push_back(std::move(rec));
  return id;
}

std::optional<RecordId> KContext::find(const FinVector& f) const {
  auto it = by_functional_.find(to_string(f));
  if (it == by_functional_.end()) return std::nullopt;
  return it->second;
}

std::optional<RecordId> KContext::find(const FinVector& f, int weight_index) const {
  auto it = by_key_.find(record_key(f, weight_index));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

bool KContext::within_caps(const FinVector& f) const {
  return f.is_zero() || (f.max_support() <= caps_.window && f.support_size() <= caps_.max_support_size);
}

void KContext::generate() {
  if (built_ >= 0) return;
  for (Index i = 1; i <= caps_.window; ++i)
    for (int s : {1, -1}) {
      KRecord rec;
      rec.f = FinVector::unit(i, s);
      rec.sign = s;
      insert(std::move(rec));
    }
  built_ = 0;
  for (int n = 1; n <= caps_.generation_cap && saturated_; ++n) {
    std::size_t prev = records_.size();
    build_regular(n, prev);
    if (saturated_) build_special(n, prev);
    if (saturated_) built_ = n;
  }
}

void KContext::build_regular(int generation, std::size_t prev) {
  std::vector<std::vector<RecordId>> by_min(static_cast<std::size_t>(caps_.window + 1));
  for (std::size_t id = 0; id < prev; ++id) {
    const auto& f = records_[id].f;
    if (f.support_size() <= caps_.max_support_size)
      by_min[static_cast<std::size_t>(f.min_support())].push_back(static_cast<RecordId>(id));
  }
  struct Weight {
    int index;
    Rational w;
    long arity;
  };
  std::vector<Weight> weights;
  long max_arity = 0;
  for (int w : caps_.regular_weights) {
    long a = std::min(caps_.arity_cap, sched_.arity(w, caps_.arity_cap));
    weights.push_back({w, sched_.weight(w), a});
    max_arity = std::max(max_arity, a);
  }

  std::vector<RecordId> chain;
  auto extend = [&](auto&& self, Index last, std::size_t size, const FinVector& sum) -> void {
    if (!saturated_) return;
    if (!chain.empty()) {
      int depth = 0;
      for (RecordId c : chain) depth = std::max(depth, records_[c].depth);
      for (const auto& w : weights) {
        if (static_cast<long>(chain.size()) > w.arity) continue;
        KRecord rec;
        rec.f = sum;
        rec.f *= w.w;
        rec.formation = Formation::regular;
        rec.weight_index = w.index;
        rec.children = chain;
        rec.generation = generation;
        rec.depth = depth + 1;
        insert(std::move(rec));
      }
    }
    if (static_cast<long>(chain.size()) >= max_arity) return;
    for (Index m = last + 1; m <= caps_.window; ++m) {
      for (RecordId id : by_min[static_cast<std::size_t>(m)]) {
        const auto& f = records_[id].f;
        if (size + f.support_size() > caps_.max_support_size) continue;
        chain.push_back(id);
        FinVector next = sum;
        next += f;
        self(self, f.max_support(), size + f.support_size(), next);
        chain.pop_back();
      }
    }
  };
  extend(extend, 0, 0, FinVector());
}

void KContext::add_restrictions(const FinVector& g, int seq, Formation form, int k, int generation, int depth) {
  const auto& model = sequences_[static_cast<std::size_t>(seq)];
  Rational w = sched_.weight(model.special_weight_index());
  auto pos = positions(g);
  for (std::size_t a = 0; a < pos.size(); ++a)
    for (std::size_t b = a; b < pos.size(); ++b) {
      if (b - a + 1 > caps_.max_support_size) break;
      Interval e{pos[a], pos[b]};
      FinVector cut = restrict(g, e);
      for (int s : {1, -1}) {
        KRecord rec;
        rec.f = cut;
        rec.f *= w * s;
        rec.formation = form;
        rec.weight_index = model.special_weight_index();
        rec.sign = s;
        rec.restriction = e;
        rec.k = k;
        rec.sequence = seq;
        rec.generation = generation;
        rec.depth = depth;
        insert(std::move(rec));
      }
    }
}

void KContext::build_special(int generation, std::size_t prev) {
  for (std::size_t s = 0; s < sequences_.size() && saturated_; ++s) {
    const auto& model = sequences_[s];
    for (int k = 0;; ++k) {
      std::vector<FinVector> members;
      for (const auto& f : model.members) members.push_back(lambda_power_lift(f, k));
      if (members.back().max_support() > caps_.window) break;
      int depth = 0;
      bool present = true;
      for (std::size_t i = 0; i < members.size() && present; ++i) {
        auto id = find(members[i], model.weight_indices[i]);
        present = id && *id < prev;
        if (present) depth = std::max(depth, records_[*id].depth);
      }
      if (!present) continue;
      FinVector sum;
      for (const auto& g : members) sum += g;
      if (k == 0) {
        for (int r = 0; !sum.is_zero(); ++r) {
          add_restrictions(sum, static_cast<int>(s), Formation::r_special, r, generation, depth + 1);
          sum = apply_R(sum);
        }
      } else {
        add_restrictions(sum, static_cast<int>(s), Formation::lambda_special, k, generation, depth + 1);
      }
    }
  }
}

std::vector<FinVector> KContext::special_members(const KRecord& rec) const {
  const auto& model = sequences_.at(static_cast<std::size_t>(rec.sequence));
  if (rec.formation == Formation::r_special) return model.members;
  std::vector<FinVector> out;
  for (const auto& f : model.members) out.push_back(lambda_power_lift(f, rec.k));
  return out;
}

FinVector KContext::reconstruct(RecordId id) const {
  const auto& rec = records_.at(id);
  switch (rec.formation) {
    case Formation::terminal:
      if (rec.f.support_size() != 1) return FinVector();
      return FinVector::unit(rec.f.min_support(), rec.sign);
    case Formation::regular: {
      FinVector sum;
      for (RecordId c : rec.children) sum += records_.at(c).f;
      sum *= sched_.weight(rec.weight_index);
      return sum;
    }
    case Formation::r_special:
    case Formation::lambda_special: {
      const auto& model = sequences_.at(static_cast<std::size_t>(rec.sequence));
      FinVector sum;
      for (const auto& g : special_members(rec)) sum += g;
      if (rec.formation == Formation::r_special) sum = apply_R_pow(sum, rec.k);
      FinVector out = restrict(sum, rec.restriction);
      out *= sched_.weight(model.special_weight_index()) * rec.sign;
      return out;
    }
    case Formation::admitted: return FinVector();
  }
  return FinVector();
}

TreeCertificate KContext::certificate(RecordId id) const {
  const auto& rec = records_.at(id);
  switch (rec.formation) {
    case Formation::terminal: return TreeCertificate::terminal(rec.sign, rec.f.min_support());
    case Formation::regular: {
      std::vector<TreeCertificate> children;
      for (RecordId c : rec.children) children.push_back(certificate(c));
      return TreeCertificate::weighted(1, rec.weight_index, NodeTag::regular, *rec.f.range(), std::move(children));
    }
    case Formation::r_special:
    case Formation::lambda_special: {
      const auto& model = sequences_.at(static_cast<std::size_t>(rec.sequence));
      auto members = special_members(rec);
      std::vector<TreeCertificate> children;
      for (std::size_t i = 0; i < members.size(); ++i) {
        auto mid = find(members[i], model.weight_indices[i]);
        children.push_back(mid ? certificate(*mid)
                               : flat_regular_certificate(members[i], model.weight_indices[i], sched_));
      }
      NodeTag tag = rec.formation == Formation::r_special ? NodeTag::r_special : NodeTag::lambda_special;
      return TreeCertificate::weighted(rec.sign, rec.weight_index, tag, rec.restriction, std::move(children),
                                       rec.formation == Formation::r_special ? rec.k : 0);
    }
    case Formation::admitted: break;
  }
  throw CertificateError("record " + to_string(rec.f) + " has no formation");
}

KContext generate_K(const KCaps& caps, const ParameterSchedule& sched, std::vector<SpecialSequence> models,
                    SigmaRegistry registry) {
  KContext ctx(sched, caps, std::move(registry));
  for (auto& m : models) ctx.add_sequence(std::move(m));
  ctx.generate();
  return ctx;
}

}  // namespace gms
