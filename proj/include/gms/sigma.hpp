#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gms/fin_vector.hpp"
#include "gms/schedule.hpp"

namespace gms {

/// "<count>|" followed by "<nnz>[i:num/den,...]" per functional, coordinates
/// in increasing index order. [e_1^*] encodes as "1|1[1:1/1]".
std::string canonical_serialize(const std::vector<FinVector>& seq);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Injective coding of finite functional sequences by weight indices in 4N.
class SigmaRegistry {
 public:
  explicit SigmaRegistry(ScheduleMode mode = ScheduleMode::compact) : mode_(mode) {}

  ScheduleMode mode() const { return mode_; }

  /// Existing index for seq, or a fresh one: the smallest unused multiple of 4
  /// that is >= 4 maxsupp(f_d) / ||f_1+...+f_d||_inf in conforming mode, or the
  /// smallest unused multiple of 4 in compact mode. seq must be a nonempty
  /// block sequence of nonzero functionals.
  int assign(const std::vector<FinVector>& seq);

  /// 0 when seq has no index.
  int lookup(const std::vector<FinVector>& seq) const;
  bool contains_index(int sigma) const { return used_.count(sigma) != 0; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, int>& entries() const { return entries_; }

  /// Text form: a "mode<TAB><mode>" header, then one
  /// "<hash><TAB><serialization><TAB><sigma>" line per entry in key order.
  std::string to_text() const;
  static SigmaRegistry from_text(const std::string& text);

  /// Writes atomically via a sibling temporary file, holding "<path>.lock"
  /// for the duration; fails if the lock already exists.
  void save(const std::filesystem::path& path) const;
  static SigmaRegistry load(const std::filesystem::path& path);

  friend bool operator==(const SigmaRegistry&, const SigmaRegistry&) = default;

 private:
  void insert(const std::string& key, int sigma);

  ScheduleMode mode_;
  std::map<std::string, int> entries_;
  std::map<int, std::string> used_;
};

}  // namespace gms
