#include "gms/certificate.hpp"

#include <algorithm>

#include "gms/spread.hpp"

namespace gms {

std::string to_string(NodeTag tag) {
  switch (tag) {
    case NodeTag::regular: return "regular";
    case NodeTag::r_special: return "r_special";
    case NodeTag::lambda_special: return "lambda_special";
  }
  return "regular";
}

NodeTag parse_tag(const std::string& text) {
  if (text == "regular") return NodeTag::regular;
  if (text == "r_special") return NodeTag::r_special;
  if (text == "lambda_special") return NodeTag::lambda_special;
  throw ParseError("unknown certificate tag '" + text + "'");
}

TreeCertificate TreeCertificate::terminal(int sign, Index i) {
  TreeCertificate c;
  c.kind = Kind::terminal;
  c.sign = sign;
  c.index = i;
  return c;
}

TreeCertificate TreeCertificate::weighted(int sign, int j, NodeTag tag, Interval e,
                                          std::vector<TreeCertificate> children, int k) {
  TreeCertificate c;
  c.kind = Kind::weighted;
  c.sign = sign;
  c.j = j;
  c.tag = tag;
  c.k = k;
  c.restriction = e;
  c.children = std::move(children);
  return c;
}

TreeCertificate TreeCertificate::zero(int j) {
  return weighted(1, j, NodeTag::regular, Interval{1, 1}, {});
}

namespace {

void check_node(const TreeCertificate& c, const ParameterSchedule& sched, const std::string& path,
                std::vector<std::string>& out) {
  if (c.sign != 1 && c.sign != -1) out.push_back(path + ": field: sign must be +1 or -1");
  if (c.is_terminal()) {
    if (c.index < 1) out.push_back(path + ": leaf: index must be >= 1");
    if (!c.children.empty()) out.push_back(path + ": leaf: terminal node has children");
    return;
  }
  if (c.j < 1) {
    out.push_back(path + ": field: weight index must be >= 1");
    return;
  }
  if (c.k < 0) out.push_back(path + ": field: negative R power");
  if (c.k != 0 && c.tag != NodeTag::r_special) out.push_back(path + ": field: R power on non r_special node");
  long limit = static_cast<long>(c.children.size()) + 1;
  try {
    long allowed = sched.arity(c.j, limit);
    if (static_cast<long>(c.children.size()) > allowed)
      out.push_back(path + ": arity: " + std::to_string(c.children.size()) + " children exceed n_" +
                    std::to_string(c.j) + " = " + std::to_string(allowed));
  } catch (const CapacityError& e) {
    out.push_back(path + ": arity: " + e.what());
  }
  std::vector<FinVector> flat;
  flat.reserve(c.children.size());
  for (std::size_t i = 0; i < c.children.size(); ++i) {
    std::string child_path = path + "." + std::to_string(i);
    std::size_t before = out.size();
    check_node(c.children[i], sched, child_path, out);
    if (out.size() == before) flat.push_back(flatten(c.children[i], sched));
  }
  if (flat.size() == c.children.size() && !is_block_sequence(flat))
    out.push_back(path + ": blockness: children supports are not strictly increasing");
}

Rational eval_node(const TreeCertificate& c, const FinVector& x, const ParameterSchedule& sched) {
  if (c.is_terminal()) return c.sign * x.get(c.index);
  FinVector y = restrict(x, c.restriction);
  if (c.tag == NodeTag::r_special) y = apply_S_pow(y, c.k);
  Rational sum = 0;
  for (const auto& child : c.children) sum += eval_node(child, y, sched);
  return c.sign * sum * sched.weight(c.j);
}

}  // namespace

StructureReport verify_certificate_structure(const TreeCertificate& c, const ParameterSchedule& sched) {
  StructureReport r;
  check_node(c, sched, "root", r.diagnostics);
  r.ok = r.diagnostics.empty();
  return r;
}

FinVector flatten(const TreeCertificate& c, const ParameterSchedule& sched) {
  if (c.is_terminal()) return FinVector::unit(c.index, c.sign);
  FinVector sum;
  for (const auto& child : c.children) sum += flatten(child, sched);
  if (c.tag == NodeTag::r_special) sum = apply_R_pow(sum, c.k);
  sum = restrict(sum, c.restriction);
  sum *= c.sign * sched.weight(c.j);
  return sum;
}

Rational evaluate_certificate(const TreeCertificate& c, const FinVector& x, const ParameterSchedule& sched) {
  auto report = verify_certificate_structure(c, sched);
  if (!report.ok) throw CertificateError("invalid certificate: " + report.diagnostics.front());
  return eval_node(c, x, sched);
}

int depth(const TreeCertificate& c) {
  if (c.is_terminal()) return 0;
  int d = 0;
  for (const auto& child : c.children) d = std::max(d, depth(child));
  return d + 1;
}

nlohmann::json to_json(const TreeCertificate& c) {
  nlohmann::json j;
  j["sign"] = c.sign;
  if (c.is_terminal()) {
    j["kind"] = "terminal";
    j["index"] = c.index;
    return j;
  }
  j["kind"] = "weighted";
  j["j"] = c.j;
  j["tag"] = to_string(c.tag);
  if (c.tag == NodeTag::r_special) j["k"] = c.k;
  j["E"] = nlohmann::json::array({c.restriction.lo, c.restriction.hi});
  j["children"] = nlohmann::json::array();
  for (const auto& child : c.children) j["children"].push_back(to_json(child));
  return j;
}

TreeCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    int sign = j.at("sign").get<int>();
    if (kind == "terminal") return TreeCertificate::terminal(sign, j.at("index").get<Index>());
    if (kind != "weighted") throw ParseError("unknown certificate kind '" + kind + "'");
    const auto& e = j.at("E");
    if (!e.is_array() || e.size() != 2) throw ParseError("certificate field E must be [lo,hi]");
    std::vector<TreeCertificate> children;
    for (const auto& child : j.at("children")) children.push_back(certificate_from_json(child));
    NodeTag tag = parse_tag(j.at("tag").get<std::string>());
    int k = j.contains("k") ? j.at("k").get<int>() : 0;
    return TreeCertificate::weighted(sign, j.at("j").get<int>(), tag,
                                     Interval{e[0].get<Index>(), e[1].get<Index>()},
                                     std::move(children), k);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed certificate: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw ParseError(std::string("malformed certificate: ") + ex.what());
  }
}

std::string serialize(const TreeCertificate& c) { return to_json(c).dump(); }

TreeCertificate parse_certificate(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("certificate is not valid JSON: ") + ex.what());
  }
  return certificate_from_json(j);
}

}  // namespace gms
