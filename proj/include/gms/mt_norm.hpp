#pragma once

#include <optional>

#include "gms/certificate.hpp"
#include "gms/fin_vector.hpp"
#include "gms/schedule.hpp"

namespace gms {

struct NormResult {
  Rational value;
  /// Present whenever the value is exact; evaluates to `value` on x.
  std::optional<TreeCertificate> certificate;
  /// Largest weight index that was allowed to compete on some subinterval.
  int effective_j = 0;
  /// False when arity relaxation was used; `value` is then an upper bound.
  bool exact = true;
};

struct MtOptions {
  /// Weights with n_j >= this threshold are treated as having unbounded arity.
  /// 0 disables relaxation.
  long arity_relax_threshold = 0;
};

/// Smallest J with m_{J+1} > norm_one(x) / norm_infty(x). Weighted functionals
/// of index > J cannot beat the l-infinity functional at the top level.
int effective_j_bound(const FinVector& x, const ParameterSchedule& sched);

/// Norm of x under the canonical norming set of the mixed Tsirelson space,
/// by dynamic programming over consecutive partitions of the support.
///
/// On each subinterval only weights with m_j < l1/linf of that piece compete
/// (larger weights are dominated by the l-infinity functional there).
/// Ties are broken toward the terminal, then the smallest j, the fewest
/// pieces and the leftmost split, so the certificate is deterministic.
NormResult mt_norm_exact(const FinVector& x, const ParameterSchedule& sched, const MtOptions& opts = {});

/// Exhaustive maximum of |f(x)| over regular tree functionals of depth <= depth_cap,
/// built level by level as best values per (first, last) pair of supp(x)
/// with gaps, single-child nodes and both signs included. Weights with
/// m_j >= |supp(x)| are omitted since such a node never beats its best leaf.
/// Throws CapacityError once more than `budget` chain extensions are tried.
Rational mt_norm_oracle(const FinVector& x, const ParameterSchedule& sched, int depth_cap,
                        std::size_t budget = 2'000'000);

}  // namespace gms
