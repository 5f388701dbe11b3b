#include "gms/schedule.hpp"

#include <algorithm>

namespace gms {

std::string to_string(ScheduleMode mode) {
  return mode == ScheduleMode::conforming ? "conforming" : "compact";
}

std::string to_string(ExtensionLaw law) {
  return law == ExtensionLaw::doubling ? "doubling" : "quadratic";
}

ScheduleMode parse_mode(const std::string& text) {
  if (text == "conforming") return ScheduleMode::conforming;
  if (text == "compact") return ScheduleMode::compact;
  throw ParseError("unknown schedule mode '" + text + "'");
}

ExtensionLaw parse_law(const std::string& text) {
  if (text == "doubling") return ExtensionLaw::doubling;
  if (text == "quadratic") return ExtensionLaw::quadratic;
  throw ParseError("unknown extension law '" + text + "'");
}

ParameterSchedule ParameterSchedule::conforming() {
  ParameterSchedule s;
  s.mode_ = ScheduleMode::conforming;
  // m_j = 2^(5^(j-1)); s_j = log2(m_{j+1}^3) = 3 * 5^j.
  Integer exponent = 1;
  for (int j = 1; j <= kConformingMaxM; ++j) {
    Integer m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, exponent.get_ui());
    s.m_.push_back(m);
    exponent *= 5;
  }
  s.n_.push_back(4);
  Integer five_pow = 5;
  for (int j = 1; j < kConformingMaxN; ++j) {
    unsigned long sj = 3 * five_pow.get_ui();
    Integer base = 5 * s.n_.back();
    Integer next;
    mpz_pow_ui(next.get_mpz_t(), base.get_mpz_t(), sj);
    s.n_.push_back(next);
    five_pow *= 5;
  }
  return s;
}

ParameterSchedule ParameterSchedule::compact(std::vector<Integer> m, std::vector<Integer> n,
                                             ExtensionLaw law) {
  if (m.empty() || m.size() != n.size())
    throw InvalidArgument("compact schedule needs nonempty m and n tables of equal length");
  ParameterSchedule s;
  s.mode_ = ScheduleMode::compact;
  s.law_ = law;
  s.m_ = std::move(m);
  s.n_ = std::move(n);
  s.precompute();
  auto problems = s.validate(static_cast<int>(s.m_.size()) + 2);
  if (!problems.empty()) throw InvalidArgument("invalid schedule: " + problems.front());
  return s;
}

ParameterSchedule ParameterSchedule::default_compact() {
  return compact({2, 4, 6, 8}, {4, 18, 38, 66}, ExtensionLaw::quadratic);
}

std::pair<Integer, Integer> ParameterSchedule::extend(int j) const {
  // j > table size; continue from the last known term.
  std::size_t have = m_all_.empty() ? m_.size() : m_all_.size();
  Integer m = m_all_.empty() ? m_.back() : m_all_.back();
  Integer n = n_all_.empty() ? n_.back() : n_all_.back();
  for (std::size_t t = have + 1; t <= static_cast<std::size_t>(j); ++t) {
    if (law_ == ExtensionLaw::doubling) {
      m *= 2;
      n *= 2;
    } else {
      m += 2;
      Integer sq = m * m + 2;
      n = std::max<Integer>(n + 2, sq);
    }
  }
  return {m, n};
}

void ParameterSchedule::precompute() {
  m_all_ = m_;
  n_all_ = n_;
  while (static_cast<int>(m_all_.size()) < kPrecomputed) {
    auto [m, n] = extend(static_cast<int>(m_all_.size()) + 1);
    m_all_.push_back(m);
    n_all_.push_back(n);
  }
}

Integer ParameterSchedule::m(int j) const {
  if (j < 1) throw InvalidArgument("weight index must be >= 1");
  if (mode_ == ScheduleMode::conforming) {
    if (j > kConformingMaxM)
      throw CapacityError("conforming m_" + std::to_string(j) + " is not representable");
    return m_[j - 1];
  }
  if (j <= static_cast<int>(m_all_.size())) return m_all_[j - 1];
  return extend(j).first;
}

Integer ParameterSchedule::n(int j) const {
  if (j < 1) throw InvalidArgument("arity index must be >= 1");
  if (mode_ == ScheduleMode::conforming) {
    if (j > kConformingMaxN)
      throw CapacityError("conforming n_" + std::to_string(j) + " is not representable");
    return n_[j - 1];
  }
  if (j <= static_cast<int>(n_all_.size())) return n_all_[j - 1];
  return extend(j).second;
}

Rational ParameterSchedule::weight(int j) const {
  Rational w(Integer(1), m(j));
  return w;
}

long ParameterSchedule::arity(int j, long cap) const {
  // n_j is increasing and n_4 already dwarfs any machine cap.
  if (mode_ == ScheduleMode::conforming && j > kConformingMaxN) return cap;
  Integer v = n(j);
  if (v >= cap) return cap;
  return v.get_si();
}

int ParameterSchedule::max_feasible_index() const {
  if (mode_ == ScheduleMode::conforming) return std::min(kConformingMaxM, kConformingMaxN);
  return 1 << 30;
}

std::vector<std::string> ParameterSchedule::validate(int upto) const {
  std::vector<std::string> out;
  if (mode_ == ScheduleMode::conforming) upto = std::min(upto, max_feasible_index());
  Integer prev_m = 0, prev_n = 0;
  for (int j = 1; j <= upto; ++j) {
    Integer mj = m(j), nj = n(j);
    std::string at = " at j=" + std::to_string(j);
    if (j == 1 && mj < 2) out.push_back("m_1 < 2");
    if (mj % 2 != 0) out.push_back("m_j odd" + at);
    if (nj % 2 != 0) out.push_back("n_j odd" + at);
    if (mj > nj) out.push_back("m_j > n_j" + at);
    if (j > 1 && mj <= prev_m) out.push_back("m not strictly increasing" + at);
    if (j > 1 && nj <= prev_n) out.push_back("n not strictly increasing" + at);
    prev_m = mj;
    prev_n = nj;
  }
  return out;
}

std::string ParameterSchedule::describe() const {
  if (mode_ == ScheduleMode::conforming) return "conforming(m1=2,n1=4,m_{j+1}=m_j^5)";
  std::string out = "compact(m=";
  for (std::size_t i = 0; i < m_.size(); ++i) out += (i ? "," : "") + m_[i].get_str();
  out += ";n=";
  for (std::size_t i = 0; i < n_.size(); ++i) out += (i ? "," : "") + n_[i].get_str();
  out += ";law=" + to_string(law_) + ")";
  return out;
}

}  // namespace gms
