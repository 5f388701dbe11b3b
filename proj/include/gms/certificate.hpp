#pragma once

#include <string>
#include <vector>

#include "gms/fin_vector.hpp"
#include "gms/schedule.hpp"
#include "json.hpp"

namespace gms {

enum class NodeTag { regular, r_special, lambda_special };

std::string to_string(NodeTag tag);
NodeTag parse_tag(const std::string& text);

/// Tree-analysis of a norming functional.
///
/// A terminal node denotes sign * e_index^*. A weighted node denotes
///   sign * m_j^{-1} * E( sum of children )            for regular / lambda_special,
///   sign * m_j^{-1} * E( R^k (sum of children) )      for r_special,
/// where E is the stored restriction interval. A weighted node without
/// children denotes the zero functional.
struct TreeCertificate {
  enum class Kind { terminal, weighted };

  Kind kind = Kind::terminal;
  int sign = 1;
  Index index = 1;
  int j = 1;
  NodeTag tag = NodeTag::regular;
  int k = 0;
  Interval restriction{1, 1};
  std::vector<TreeCertificate> children;

  static TreeCertificate terminal(int sign, Index i);
  static TreeCertificate weighted(int sign, int j, NodeTag tag, Interval e,
                                  std::vector<TreeCertificate> children, int k = 0);
  /// Zero functional (weighted node with no children).
  static TreeCertificate zero(int j = 1);

  bool is_terminal() const { return kind == Kind::terminal; }
  bool is_zero_node() const { return kind == Kind::weighted && children.empty(); }

  friend bool operator==(const TreeCertificate&, const TreeCertificate&) = default;
};

/// Thrown when an operation needs a structurally valid certificate.
class CertificateError : public Error {
 public:
  using Error::Error;
};

struct StructureReport {
  bool ok = true;
  /// "<path>: <kind>: <detail>", kind one of blockness, arity, leaf, field.
  std::vector<std::string> diagnostics;
};

StructureReport verify_certificate_structure(const TreeCertificate& c, const ParameterSchedule& sched);

/// The functional the tree denotes (restrictions applied top-down).
FinVector flatten(const TreeCertificate& c, const ParameterSchedule& sched);

/// f(x) computed on the vector side, pushing restrictions and spreads into x.
/// Throws CertificateError naming the first offending node.
Rational evaluate_certificate(const TreeCertificate& c, const FinVector& x, const ParameterSchedule& sched);

/// Longest root-to-leaf path counted in weighted nodes (a terminal has depth 0).
int depth(const TreeCertificate& c);

nlohmann::json to_json(const TreeCertificate& c);
TreeCertificate certificate_from_json(const nlohmann::json& j);
/// Canonical serialization (sorted keys, no whitespace).
std::string serialize(const TreeCertificate& c);
TreeCertificate parse_certificate(const std::string& text);

}  // namespace gms
