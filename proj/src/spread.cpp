#include "gms/spread.hpp"

#include <limits>

namespace gms {

namespace {

Index doubled(Index i, int k) {
  if (k < 0) throw InvalidArgument("negative spread power");
  if (k >= 62 || i > (std::numeric_limits<Index>::max() >> k))
    throw CapacityError("index overflow in spread: " + std::to_string(i) + " * 2^" + std::to_string(k));
  return i << k;
}

}  // namespace

FinVector apply_S(const FinVector& x) { return apply_S_pow(x, 1); }

FinVector apply_S_pow(const FinVector& x, int k) {
  if (k == 0) return x;
  FinVector r;
  for (const auto& [i, v] : x) r.set(doubled(i, k), v);
  return r;
}

FinVector apply_R(const FinVector& f) {
  FinVector r;
  for (const auto& [i, v] : f)
    if (i % 2 == 0) r.set(i / 2, v);
  return r;
}

FinVector apply_R_pow(const FinVector& f, int k) {
  if (k < 0) throw InvalidArgument("negative R power");
  FinVector r = f;
  for (int t = 0; t < k && !r.is_zero(); ++t) r = apply_R(r);
  return r;
}

std::optional<Interval> r_interval_image(const Interval& e) {
  Index lo = (e.lo + 1) / 2;
  Index hi = e.hi / 2;
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

bool lambda_member(const FinVector& g, const FinVector& f, int k) {
  if (f.is_zero()) throw InvalidArgument("lambda_member: f = 0 has no range");
  if (k < 1) throw InvalidArgument("lambda_member: k must be >= 1");
  if (g.is_zero()) return false;
  if (apply_R_pow(g, k) != f) return false;
  Interval rf = *f.range();
  Index scale = doubled(1, k);
  return *g.range() == rf.scaled(scale);
}

FinVector lambda_canonical_lift(const FinVector& f) {
  if (f.is_zero()) throw InvalidArgument("lambda_canonical_lift: f = 0");
  return apply_S(f);
}

FinVector lambda_power_lift(const FinVector& f, int k) {
  if (k < 0) throw InvalidArgument("lambda_power_lift: negative k");
  return apply_S_pow(f, k);
}

}  // namespace gms
