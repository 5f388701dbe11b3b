#pragma once

#include <optional>

#include "gms/fin_vector.hpp"

namespace gms {

// The spread S sends e_i to e_{2i}; its adjoint R acts on functionals by
// (Rf)_i = f_{2i}, so that (Rf)(x) = f(Sx).

FinVector apply_S(const FinVector& x);
FinVector apply_S_pow(const FinVector& x, int k);
FinVector apply_R(const FinVector& f);
FinVector apply_R_pow(const FinVector& f, int k);

/// {i : 2i in E} = [ceil(lo/2), floor(hi/2)], or nullopt when empty.
/// Satisfies R(Ef) = image(E) R(f).
std::optional<Interval> r_interval_image(const Interval& e);

/// g in Lambda^k(f): R^k g = f and range(g) = 2^k range(f). Requires f != 0, k >= 1.
bool lambda_member(const FinVector& g, const FinVector& f, int k);

/// The index-doubling selection of Lambda(f): g_{2i} = f_i. Requires f != 0.
FinVector lambda_canonical_lift(const FinVector& f);

/// k-fold canonical lift; k = 0 returns f.
FinVector lambda_power_lift(const FinVector& f, int k);

}  // namespace gms
