#pragma once

#include <string>
#include <vector>

#include "gms/certificate.hpp"
#include "gms/sigma.hpp"

namespace gms {

/// A j-special sequence f_1 < ... < f_{2d}, or a Lambda-j-special sequence
/// k-modeled on one. Weight indices are the formation-assigned ones.
struct SpecialSequence {
  enum class Kind { j_special, lambda_special };

  Kind kind = Kind::j_special;
  int j = 1;
  /// Lambda power of the modeling (0 for a j-special sequence).
  int model_k = 0;
  std::vector<FinVector> members;
  std::vector<int> weight_indices;
  /// k_i with f_{2i} in Lambda^{k_i}(f_{2i-1}), one per pair.
  std::vector<int> k_list;
  std::vector<TreeCertificate> member_certs;

  int pairs() const { return static_cast<int>(members.size() / 2); }
  /// Weight index of the special functionals built on this sequence.
  int special_weight_index() const { return 2 * j - 1; }
  FinVector sum() const;

  friend bool operator==(const SpecialSequence&, const SpecialSequence&) = default;
};

struct JSpecialSpec {
  int j = 1;
  /// Number of pairs; the sequence has 2d members.
  int d = 1;
  /// m index of f_1; 0 selects the smallest admissible 4l-2.
  int seed_weight_index = 0;
  /// f_1 = m^{-1}(e_start^* + ... + e_{start+width-1}^*); later odd members
  /// use the same width on fresh coordinates right of their predecessor.
  Index start = 1;
  Index width = 1;
};

/// Smallest 4l-2 with m_{4l-2} > 9 n_{2j-1}^2 (conforming), or 2 (compact).
int smallest_seed_index(int j, const ParameterSchedule& sched);

/// Regular certificate m_w^{-1} * sum of signed terminals, for a functional
/// whose coefficients all have absolute value 1/m_w.
TreeCertificate flat_regular_certificate(const FinVector& f, int weight_index, const ParameterSchedule& sched);

/// Builds f_1, then f_{2i} = lift^{k_i}(f_{2i-1}) with the least k_i >= 1 that
/// keeps the blocks increasing, and f_{2i+1} of weight m_sigma^{-1} with
/// sigma = sigma(f_1..f_{2i}). Throws CapacityError (conforming-infeasible)
/// when a needed weight or arity is not representable.
SpecialSequence build_j_special(const JSpecialSpec& spec, SigmaRegistry& registry, const ParameterSchedule& sched);

/// Members g_i = lift^k(f_i) of the canonical k-modeled Lambda sequence;
/// k = 0 returns the model.
SpecialSequence build_lambda_special(const SpecialSequence& model, int k, const ParameterSchedule& sched);

struct SpecialReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Block structure, 2d <= n_{2j-1}, (S1)-(S3). The (S1) growth inequality is
/// only enforced in conforming mode; in compact mode it is noted as a caveat
/// by callers, not a violation.
SpecialReport verify_special(const SpecialSequence& seq, const ParameterSchedule& sched,
                             const SigmaRegistry& registry);

/// (Lambda1)-(Lambda3) of g against the j-special model, with power g.model_k.
SpecialReport verify_lambda_special(const SpecialSequence& g, const SpecialSequence& model,
                                    const ParameterSchedule& sched);

struct TreePropertyReport {
  bool ok = true;
  std::vector<std::string> violations;
  /// Compact-mode collisions, reported instead of violations.
  std::vector<std::string> caveats;
};

/// Weight disjointness after the first disagreement r of the odd members:
/// w(f_i) != w(h_s) for s > 2r and all i, and for s in {2r-1, 2r}, i > 2r.
TreePropertyReport check_tree_property(const std::vector<SpecialSequence>& sequences, ScheduleMode mode);

}  // namespace gms
