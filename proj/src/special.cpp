#include "gms/special.hpp"

#include "gms/spread.hpp"

namespace gms {

FinVector SpecialSequence::sum() const {
  FinVector s;
  for (const auto& f : members) s += f;
  return s;
}

int smallest_seed_index(int j, const ParameterSchedule& sched) {
  if (j < 1) throw InvalidArgument("special sequence index j must be >= 1");
  if (sched.mode() == ScheduleMode::compact) return 2;
  Integer n = sched.n(2 * j - 1);
  Integer bound = 9 * n * n;
  for (int l = 1;; ++l) {
    int idx = 4 * l - 2;
    if (idx > ParameterSchedule::kConformingMaxM)
      throw CapacityError("conforming-infeasible: no representable m_{4l-2} > 9 n_" + std::to_string(2 * j - 1) +
                          "^2; use compact mode");
    if (sched.m(idx) > bound) return idx;
  }
}

TreeCertificate flat_regular_certificate(const FinVector& f, int weight_index, const ParameterSchedule& sched) {
  if (f.is_zero()) throw InvalidArgument("flat_regular_certificate: zero functional");
  Rational w = sched.weight(weight_index);
  std::vector<TreeCertificate> leaves;
  for (const auto& [i, v] : f) {
    if (abs(v) != w) throw InvalidArgument("flat_regular_certificate: coefficient is not +-1/m_" +
                                           std::to_string(weight_index));
    leaves.push_back(TreeCertificate::terminal(sign(v), i));
  }
  return TreeCertificate::weighted(1, weight_index, NodeTag::regular, *f.range(), std::move(leaves));
}

namespace {

FinVector flat_block(Index start, Index width, const Rational& w) {
  FinVector f;
  for (Index i = start; i < start + width; ++i) f.set(i, w);
  return f;
}

void require_feasible(int idx, Index width, const ParameterSchedule& sched) {
  if (sched.mode() == ScheduleMode::conforming && idx > ParameterSchedule::kConformingMaxN)
    throw CapacityError("conforming-infeasible: n_" + std::to_string(idx) +
                        " is not representable, so the arity of a weight-" + std::to_string(idx) +
                        " node cannot be checked; use compact mode");
  if (sched.arity(idx, width) < width)
    throw CapacityError("member of width " + std::to_string(width) + " exceeds n_" + std::to_string(idx));
}

int least_block_lift(const FinVector& f) {
  for (int k = 1; k < 62; ++k)
    if (f.max_support() < (f.min_support() << k)) return k;
  throw CapacityError("no block-preserving lift within index range");
}

}  // namespace

SpecialSequence build_j_special(const JSpecialSpec& spec, SigmaRegistry& registry, const ParameterSchedule& sched) {
  if (spec.d < 1) throw InvalidArgument("special sequence needs d >= 1");
  if (spec.width < 1 || spec.start < 1) throw InvalidArgument("special sequence needs start, width >= 1");
  if (Integer(2 * spec.d) > sched.n(2 * spec.j - 1))
    throw InvalidArgument("special sequence length 2d exceeds n_" + std::to_string(2 * spec.j - 1));
  int seed = spec.seed_weight_index ? spec.seed_weight_index : smallest_seed_index(spec.j, sched);
  if (seed % 4 != 2) throw InvalidArgument("seed weight index must be 2 mod 4");

  SpecialSequence seq;
  seq.j = spec.j;
  Index start = spec.start;
  int w = seed;
  for (int i = 0; i < spec.d; ++i) {
    if (i > 0) w = registry.assign(seq.members);
    require_feasible(w, spec.width, sched);
    FinVector odd = flat_block(start, spec.width, sched.weight(w));
    int k = least_block_lift(odd);
    FinVector even = lambda_power_lift(odd, k);
    seq.members.push_back(odd);
    seq.members.push_back(even);
    seq.weight_indices.push_back(w);
    seq.weight_indices.push_back(w);
    seq.k_list.push_back(k);
    seq.member_certs.push_back(flat_regular_certificate(odd, w, sched));
    seq.member_certs.push_back(flat_regular_certificate(even, w, sched));
    start = even.max_support() + 1;
  }
  return seq;
}

SpecialSequence build_lambda_special(const SpecialSequence& model, int k, const ParameterSchedule& sched) {
  if (k < 0) throw InvalidArgument("Lambda power must be >= 0");
  if (model.kind != SpecialSequence::Kind::j_special) throw InvalidArgument("model must be a j-special sequence");
  if (k == 0) return model;
  SpecialSequence g = model;
  g.kind = SpecialSequence::Kind::lambda_special;
  g.model_k = k;
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    g.members[i] = lambda_power_lift(model.members[i], k);
    g.member_certs[i] = flat_regular_certificate(g.members[i], g.weight_indices[i], sched);
  }
  return g;
}

SpecialReport verify_special(const SpecialSequence& seq, const ParameterSchedule& sched,
                             const SigmaRegistry& registry) {
  SpecialReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  const std::size_t n = seq.members.size();
  if (n == 0 || n % 2 != 0) {
    fail("length must be a positive even number");
    return r;
  }
  if (seq.weight_indices.size() != n || seq.k_list.size() != n / 2) {
    fail("weight or k list has the wrong length");
    return r;
  }
  for (const auto& f : seq.members)
    if (f.is_zero()) fail("zero member");
  if (!r.ok) return r;
  if (!is_block_sequence(seq.members)) fail("members are not a block sequence");
  if (Integer(n) > sched.n(2 * seq.j - 1)) fail("length 2d exceeds n_" + std::to_string(2 * seq.j - 1));

  int seed = seq.weight_indices[0];
  if (seed % 4 != 2) fail("(S1) seed weight index " + std::to_string(seed) + " is not 2 mod 4");
  if (sched.mode() == ScheduleMode::conforming) {
    Integer nn = sched.n(2 * seq.j - 1);
    if (!(sched.m(seed) > 9 * nn * nn)) fail("(S1) m_" + std::to_string(seed) + " <= 9 n^2");
  }
  for (std::size_t i = 2; i < n; i += 2) {
    std::vector<FinVector> prefix(seq.members.begin(), seq.members.begin() + static_cast<long>(i));
    int sigma = registry.lookup(prefix);
    if (sigma == 0)
      fail("(S2) prefix of length " + std::to_string(i) + " has no sigma value");
    else if (seq.weight_indices[i] != sigma)
      fail("(S2) member " + std::to_string(i + 1) + " has weight index " + std::to_string(seq.weight_indices[i]) +
           ", sigma gives " + std::to_string(sigma));
  }
  for (std::size_t p = 0; p < n / 2; ++p) {
    const auto& odd = seq.members[2 * p];
    const auto& even = seq.members[2 * p + 1];
    if (seq.k_list[p] < 1 || !lambda_member(even, odd, seq.k_list[p]))
      fail("(S3) member " + std::to_string(2 * p + 2) + " is not in Lambda^" + std::to_string(seq.k_list[p]) +
           " of its predecessor");
    if (seq.weight_indices[2 * p] != seq.weight_indices[2 * p + 1])
      fail("(S3) pair " + std::to_string(p + 1) + " has unequal weights");
  }
  return r;
}

SpecialReport verify_lambda_special(const SpecialSequence& g, const SpecialSequence& model,
                                    const ParameterSchedule& sched) {
  SpecialReport r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.violations.push_back(std::move(msg));
  };
  if (g.members.size() != model.members.size() || g.weight_indices.size() != g.members.size()) {
    fail("length differs from the model");
    return r;
  }
  if (!is_block_sequence(g.members)) fail("members are not a block sequence");
  if (Integer(g.members.size()) > sched.n(2 * model.j - 1)) fail("length exceeds n_{2j-1}");
  const int k = g.model_k;
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    if (g.weight_indices[i] != model.weight_indices[i])
      fail("(Lambda1) member " + std::to_string(i + 1) + " weight differs from the model");
    bool in_lambda = k == 0 ? g.members[i] == model.members[i] : lambda_member(g.members[i], model.members[i], k);
    if (!in_lambda) fail("(Lambda" + std::string(i % 2 == 0 ? "2" : "3") + ") member " + std::to_string(i + 1) +
                         " is not in Lambda^" + std::to_string(k) + " of the model");
  }
  for (std::size_t p = 0; p < g.members.size() / 2; ++p)
    if (!lambda_member(g.members[2 * p + 1], g.members[2 * p], model.k_list[p]))
      fail("(Lambda3) member " + std::to_string(2 * p + 2) + " is not in Lambda^" +
           std::to_string(model.k_list[p]) + " of member " + std::to_string(2 * p + 1));
  return r;
}

TreePropertyReport check_tree_property(const std::vector<SpecialSequence>& sequences, ScheduleMode mode) {
  TreePropertyReport rep;
  auto report = [&](std::string msg) {
    if (mode == ScheduleMode::compact) {
      rep.caveats.push_back("compact-mode collision: " + msg);
    } else {
      rep.ok = false;
      rep.violations.push_back(std::move(msg));
    }
  };
  for (std::size_t a = 0; a < sequences.size(); ++a) {
    for (std::size_t b = 0; b < sequences.size(); ++b) {
      if (a == b) continue;
      const auto& f = sequences[a];
      const auto& h = sequences[b];
      std::size_t d = f.members.size() / 2, e = h.members.size() / 2;
      std::size_t r = 0;
      for (std::size_t i = 1; i <= std::min(d, e); ++i)
        if (f.members[2 * i - 2] != h.members[2 * i - 2]) {
          r = i;
          break;
        }
      if (r == 0) continue;
      auto check = [&](std::size_t s, std::size_t i) {
        if (f.weight_indices[i - 1] == h.weight_indices[s - 1])
          report("sequences " + std::to_string(a) + " and " + std::to_string(b) + ": w(f_" + std::to_string(i) +
                 ") = w(h_" + std::to_string(s) + ") = 1/m_" + std::to_string(f.weight_indices[i - 1]));
      };
      for (std::size_t s = 2 * r + 1; s <= 2 * e; ++s)
        for (std::size_t i = 1; i <= 2 * d; ++i) check(s, i);
      for (std::size_t s = 2 * r - 1; s <= 2 * r; ++s)
        for (std::size_t i = 2 * r + 1; i <= 2 * d; ++i) check(s, i);
    }
  }
  return rep;
}

}  // namespace gms
