#pragma once

#include <string>
#include <vector>

#include "gms/rational.hpp"

namespace gms {

enum class ScheduleMode { conforming, compact };

/// How a compact table continues past its last entry.
///  doubling:  m_{j+1} = 2 m_j,  n_{j+1} = 2 n_j
///  quadratic: m_{j+1} = m_j + 2, n_{j+1} = max(n_j + 2, m_{j+1}^2 + 2)
enum class ExtensionLaw { doubling, quadratic };

std::string to_string(ScheduleMode mode);
std::string to_string(ExtensionLaw law);
ScheduleMode parse_mode(const std::string& text);
ExtensionLaw parse_law(const std::string& text);

/// The weight sequence (m_j) and arity sequence (n_j), j >= 1.
///
/// Conforming mode is the closed form m_1 = 2, n_1 = 4, m_{j+1} = m_j^5,
/// n_{j+1} = (5 n_j)^{s_j} with s_j = log2(m_{j+1}^3). Only the first few
/// terms are representable: m_j is available for j <= kConformingMaxM and
/// n_j for j <= kConformingMaxN; past that the accessors throw CapacityError.
class ParameterSchedule {
 public:
  static constexpr int kConformingMaxM = 8;
  static constexpr int kConformingMaxN = 4;

  static ParameterSchedule conforming();
  /// Tables must be nonempty, equally long, even, strictly increasing, m_1 >= 2
  /// and m_j <= n_j.
  static ParameterSchedule compact(std::vector<Integer> m, std::vector<Integer> n,
                                   ExtensionLaw law);
  /// m = (2, 4, 6, 8), n = (4, 18, 38, 66), quadratic extension.
  static ParameterSchedule default_compact();

  ScheduleMode mode() const { return mode_; }
  ExtensionLaw law() const { return law_; }
  const std::vector<Integer>& m_table() const { return m_; }
  const std::vector<Integer>& n_table() const { return n_; }

  Integer m(int j) const;
  Integer n(int j) const;
  /// 1 / m_j.
  Rational weight(int j) const;
  /// n_j clamped to `cap` (n_j may not fit in a machine integer).
  long arity(int j, long cap) const;

  /// Largest j whose m_j and n_j are both computable.
  int max_feasible_index() const;

  /// Human-readable list of invariant violations among the first `upto` terms.
  std::vector<std::string> validate(int upto) const;

  std::string describe() const;

  friend bool operator==(const ParameterSchedule& a, const ParameterSchedule& b) {
    return a.mode_ == b.mode_ && a.law_ == b.law_ && a.m_ == b.m_ && a.n_ == b.n_;
  }

 private:
  ParameterSchedule() = default;
  void precompute();
  std::pair<Integer, Integer> extend(int j) const;

  ScheduleMode mode_ = ScheduleMode::compact;
  ExtensionLaw law_ = ExtensionLaw::quadratic;
  std::vector<Integer> m_;
  std::vector<Integer> n_;
  // Table followed by its extension up to kPrecomputed terms.
  std::vector<Integer> m_all_;
  std::vector<Integer> n_all_;
  static constexpr int kPrecomputed = 1024;
};

}  // namespace gms
