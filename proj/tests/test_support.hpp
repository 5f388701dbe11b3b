#pragma once

// Hand-rolled generators for property-style tests. Every generator takes an
// explicit engine so failures reproduce from the seed alone.

#include <random>
#include <vector>

#include "gms/certificate.hpp"
#include "gms/fin_vector.hpp"

namespace gms::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, long max_num = 5, long max_den = 4) {
  long num = 0;
  while (num == 0) num = uniform(rng, -max_num, max_num);
  return make_rational(num, static_cast<unsigned long>(uniform(rng, 1, max_den)));
}

/// Random vector supported in [lo, hi]; each coordinate present with probability p.
inline FinVector random_vector(Rng& rng, Index lo, Index hi, double p = 0.6, long max_num = 5,
                               long max_den = 4) {
  FinVector v;
  std::bernoulli_distribution keep(p);
  for (Index i = lo; i <= hi; ++i)
    if (keep(rng)) v.set(i, random_rational(rng, max_num, max_den));
  return v;
}

inline FinVector random_nonzero_vector(Rng& rng, Index lo, Index hi, double p = 0.6) {
  FinVector v;
  while (v.is_zero()) v = random_vector(rng, lo, hi, p);
  return v;
}

/// Random certificate on [lo, hi] with weight indices in [1, max_j]. Children
/// partition the interval; nested r_special nodes can still break blockness.
inline TreeCertificate random_certificate_raw(Rng& rng, const ParameterSchedule& sched, Index lo, Index hi,
                                          int depth_left, int max_j = 3, bool allow_special = false) {
  if (depth_left == 0 || lo == hi || uniform(rng, 0, 3) == 0)
    return TreeCertificate::terminal(uniform(rng, 0, 1) ? 1 : -1, uniform(rng, lo, hi));
  int j = static_cast<int>(uniform(rng, 1, max_j));
  long width = hi - lo + 1;
  long d = uniform(rng, 1, std::min<long>(sched.arity(j, width), width));
  std::vector<Index> cuts;
  for (Index i = lo + 1; i <= hi; ++i) cuts.push_back(i);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(d - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<TreeCertificate> children;
  Index start = lo;
  for (std::size_t t = 0; t <= cuts.size(); ++t) {
    Index end = t < cuts.size() ? cuts[t] - 1 : hi;
    children.push_back(random_certificate_raw(rng, sched, start, end, depth_left - 1, max_j, allow_special));
    start = end + 1;
  }
  Index elo = uniform(rng, 1, lo);
  Index ehi = uniform(rng, lo, hi + 3);
  NodeTag tag = NodeTag::regular;
  int k = 0;
  if (allow_special && uniform(rng, 0, 2) == 0) {
    tag = NodeTag::r_special;
    k = static_cast<int>(uniform(rng, 0, 2));
  }
  return TreeCertificate::weighted(uniform(rng, 0, 1) ? 1 : -1, j, tag, Interval{elo, ehi},
                                   std::move(children), k);
}

/// Structurally valid random certificate; r_special nodes are emitted when
/// allow_special is set.
inline TreeCertificate random_certificate(Rng& rng, const ParameterSchedule& sched, Index lo, Index hi,
                                          int depth_left, int max_j = 3, bool allow_special = false) {
  for (;;) {
    auto c = random_certificate_raw(rng, sched, lo, hi, depth_left, max_j, allow_special);
    if (verify_certificate_structure(c, sched).ok) return c;
  }
}

}  // namespace gms::testing
