#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gms/kset.hpp"
#include "json.hpp"

namespace gms {

struct LowerBound {
  Rational value;
  TreeCertificate certificate;
  /// Record realizing the value (its negation when the value was attained by -f).
  RecordId record = 0;
};

/// max |f(x)| over the members of ctx. Ties: smaller depth, then smaller
/// certificate serialization.
LowerBound gm_norm_lower(const FinVector& x, const KContext& ctx);

struct NormBracket {
  Rational lower;
  TreeCertificate lower_cert;
  Rational upper;
  int depth_cap = 0;
  /// Max over members of depth <= depth_cap.
  Rational enumerated;
  /// min(||x||_1, mixed Tsirelson norm) when computed; K lies inside the
  /// mixed Tsirelson norming set.
  std::optional<Rational> certified_upper;
  std::vector<std::string> caveats;
};

/// upper = enumerated + 2^{-D} ||x||_1, clamped to ||x||_1.
NormBracket gm_norm_bracket(const FinVector& x, const KContext& ctx, int depth_cap);

nlohmann::json to_json(const NormBracket& b);

/// Certificate for Sx with R(flatten(g)) = flatten(c); built node by node as in
/// the lift of the inclusion K within R(K).
TreeCertificate transfer_certificate_S(const TreeCertificate& c);
/// Same, but throws CapacityError when the lifted functional leaves the caps of ctx.
TreeCertificate transfer_certificate_S(const TreeCertificate& c, const KContext& ctx);

/// Certificate of R(flatten(g)); pair(Rg, x) = pair(g, Sx).
TreeCertificate transfer_certificate_R(const TreeCertificate& g);

struct IsometryReport {
  FinVector x;
  Rational norm_x;
  Rational norm_sx;
  TreeCertificate cert_x;
  TreeCertificate cert_sx;
  /// S-transfer of cert_x, evaluated on Sx.
  TreeCertificate lifted;
  Rational lifted_value;
  /// R-transfer of cert_sx, evaluated on x.
  TreeCertificate pulled;
  Rational pulled_value;
  bool ok = true;
  std::vector<std::string> diagnostics;
};

/// Compares the lower norms of x and Sx on ctx and checks both transfers:
/// structure, evaluation, functional identity, and membership in ctx.
IsometryReport isometry_check(const FinVector& x, const KContext& ctx);

nlohmann::json to_json(const IsometryReport& r);

}  // namespace gms
