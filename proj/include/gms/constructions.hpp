#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gms/engine.hpp"

namespace gms {

/// A normalized block with a norming functional of equal range: f(x) = 1.
struct NormedBlock {
  FinVector x;
  FinVector f;
  TreeCertificate cert;
};

/// Source of normalized blocks; next(lo) returns the first block with min support >= lo.
struct BlockFamily {
  std::string name;
  std::function<NormedBlock(Index lo)> next;
};

/// e_i with e_i^*.
BlockFamily unit_blocks();

/// First count blocks of the family, each starting after the previous one.
std::vector<NormedBlock> take_blocks(const BlockFamily& family, Index lo, std::size_t count);

/// Sound upper bound on ||x||: min(||x||_1, mixed Tsirelson norm of x). The
/// mixed Tsirelson norm only depends on the order pattern of supp(x), so it
/// is computed on the compressed vector.
Rational certified_upper(const FinVector& x, const ParameterSchedule& sched);

struct L1AverageWitness {
  FinVector x;
  std::vector<FinVector> parts;
  Rational C;
  long N = 0;
  Rational lower;
  Rational upper;
  TreeCertificate cert;
  /// Number of basis blocks per part.
  std::size_t chunk = 0;
};

/// Greedy search: parts are sums of L consecutive blocks (L = 1, 2, 4, ...),
/// x is their sum scaled to certified norm 1. Throws CapacityError when no L
/// within the budget of blocks works.
L1AverageWitness find_l1_average(const BlockFamily& basis, long N, const Rational& C, const Rational& eps,
                                 const KContext& ctx, std::size_t block_budget = 4096);

struct SweepReport {
  bool ok = true;
  std::size_t checked = 0;
  /// Smallest slack bound - |f(x)| seen (absent when nothing was checked).
  std::optional<Rational> margin;
  std::vector<std::string> violations;
};

/// |f(x)| <= 3 w(f) for weighted f in ctx with w(f) > 1/m_j.
SweepReport verify_av_est(const FinVector& x, int j, const KContext& ctx);

struct SSWitness {
  FinVector x;
  TreeCertificate cert;
  Rational lower;
  Rational sup_norm;
  /// m_{2j} / n_{2j}.
  Rational ratio;
};

/// x = m_{2j} n_{2j}^{-1} (x_1 + ... + x_{n_{2j}}) with certificate m_{2j}^{-1}(f_1 + ... + f_{n_{2j}}).
SSWitness make_ss_witness(int j, const BlockFamily& basis, const ParameterSchedule& sched);

struct RISReport {
  bool ok = true;
  std::vector<std::string> failures;
  int checked_generation = 0;
  int stability_checked = 0;
};

/// Clauses (1)-(3) of a (C, eps)-RIS, clause (3) over ctx, repeated for S^k xs, k <= k_cap.
RISReport verify_ris(const std::vector<FinVector>& xs, const Rational& C, const Rational& eps,
                     const std::vector<int>& js, const KContext& ctx, int k_cap = 0);

struct BasicInequalityReport {
  bool consistent = true;
  Rational lower;
  Rational upper;
  Rational bound_2c;
  std::optional<Rational> bound_4c;
  bool within_2c = false;
  std::vector<std::string> notes;
};

/// Bracket of ||n_j^{-1} sum x_i|| against 2C/m_j (and 4C/m_j^2 when every h in
/// ctx satisfies |h(sum_{i in E} x_i)| <= C on intervals E).
BasicInequalityReport check_basic_inequality(const std::vector<FinVector>& xs, const Rational& C, int j,
                                             const KContext& ctx);

struct ExactPairWitness {
  FinVector x;
  FinVector f;
  TreeCertificate cert;
  int j = 0;
  bool ok = true;
  bool stable = true;
  int k_checked = 0;
  Rational upper;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
};

/// Checks the four exact-pair clauses. Clause (4) holds for all of K when
/// ||x||_1 <= 9 (|h(x)| <= w(h) ||x||_1); otherwise it is swept over ctx.
ExactPairWitness verify_exact_pair(const FinVector& x, const TreeCertificate& cert, int j,
                                   const ParameterSchedule& sched, const KContext* ctx = nullptr, int k_cap = 0);

/// x = m_j/n_j sum x_i, f = m_j^{-1} sum f_i over n_j blocks starting at lo.
ExactPairWitness make_stable_exact_pair(int j, const BlockFamily& basis, const ParameterSchedule& sched,
                                        Index lo = 1, const KContext* ctx = nullptr, int k_cap = 3);

struct ClauseStatus {
  std::string name;
  bool ok = true;
  /// Failure tolerated as a schedule-mode caveat.
  bool caveat = false;
  std::string detail;
};

struct DependentSequence {
  int j = 1;
  std::vector<FinVector> xs;
  std::vector<FinVector> fs;
  std::vector<TreeCertificate> certs;
  std::vector<int> js;
  std::vector<int> ks;
  std::vector<int> ss;
  std::vector<ExactPairWitness> pairs;
  SpecialSequence special;
};

/// Alternating stable exact pairs from the family and their S^{k_i} images,
/// weights from the sigma registry.
DependentSequence build_dependent_sequence(int j, const BlockFamily& family, const ParameterSchedule& sched,
                                           SigmaRegistry& registry, const KContext* ctx = nullptr);

/// (D1)-(D7); (D5) both from (D7) and by direct scan for k <= k_cap (default: k_last + s_last + 2).
std::vector<ClauseStatus> verify_dependent_sequence(const DependentSequence& ds, const ParameterSchedule& sched,
                                                    const SigmaRegistry& registry, int k_cap = -1);

struct ComplementationWitness {
  FinVector y;
  FinVector z;
  TreeCertificate sum_cert;
  Rational sum_lower;
  Rational diff_upper;
  Rational ratio;
  Rational paper_reference;
  bool y_even = true;
  bool disjoint = true;
  bool ok = true;
  std::vector<std::string> caveats;
};

ComplementationWitness complementation_witness(const DependentSequence& ds, const ParameterSchedule& sched);

nlohmann::json to_json(const ExactPairWitness& w);
nlohmann::json to_json(const DependentSequence& ds, const std::vector<ClauseStatus>& clauses);
nlohmann::json to_json(const ComplementationWitness& w);
nlohmann::json to_json(const SSWitness& w);

}  // namespace gms
