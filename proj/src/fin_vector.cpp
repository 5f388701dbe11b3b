#include "gms/fin_vector.hpp"

#include <algorithm>
#include <charconv>

namespace gms {

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw ParseError("empty rational");
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) pos = 1;
    if (pos == s.size()) return false;
    return std::all_of(s.begin() + pos, s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!valid_int(num, true) || (slash != std::string_view::npos && !valid_int(den, false)))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n[0] == '+') n.erase(0, 1);
  Integer p(n, 10);
  Integer q = slash == std::string_view::npos ? Integer(1) : Integer(std::string(den), 10);
  if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Interval::Interval(Index l, Index h) : lo(l), hi(h) {
  if (l < 1 || h < l) throw InvalidArgument("invalid interval [" + std::to_string(l) + "," + std::to_string(h) + "]");
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Index lo = std::max(a.lo, b.lo);
  Index hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

FinVector::FinVector(std::initializer_list<std::pair<const Index, Rational>> init) {
  for (const auto& [i, v] : init) add(i, v);
}

FinVector FinVector::unit(Index i, const Rational& value) {
  FinVector v;
  v.set(i, value);
  return v;
}

Rational FinVector::get(Index i) const {
  auto it = coords_.find(i);
  return it == coords_.end() ? Rational(0) : it->second;
}

void FinVector::set(Index i, const Rational& value) {
  if (i < 1) throw InvalidArgument("coordinate index must be >= 1, got " + std::to_string(i));
  if (value == 0) {
    coords_.erase(i);
  } else {
    coords_[i] = value;
  }
}

void FinVector::add(Index i, const Rational& value) {
  if (value == 0) return;
  if (i < 1) throw InvalidArgument("coordinate index must be >= 1, got " + std::to_string(i));
  auto [it, inserted] = coords_.try_emplace(i, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) coords_.erase(it);
  }
}

std::vector<Index> FinVector::support() const {
  std::vector<Index> s;
  s.reserve(coords_.size());
  for (const auto& kv : coords_) s.push_back(kv.first);
  return s;
}

Index FinVector::min_support() const {
  if (coords_.empty()) throw InvalidArgument("min support of zero vector");
  return coords_.begin()->first;
}

Index FinVector::max_support() const {
  if (coords_.empty()) throw InvalidArgument("max support of zero vector");
  return coords_.rbegin()->first;
}

std::optional<Interval> FinVector::range() const {
  if (coords_.empty()) return std::nullopt;
  return Interval{coords_.begin()->first, coords_.rbegin()->first};
}

FinVector& FinVector::operator+=(const FinVector& other) {
  for (const auto& [i, v] : other.coords_) add(i, v);
  return *this;
}

FinVector& FinVector::operator-=(const FinVector& other) {
  for (const auto& [i, v] : other.coords_) add(i, -v);
  return *this;
}

FinVector& FinVector::operator*=(const Rational& s) {
  if (s == 0) {
    coords_.clear();
    return *this;
  }
  for (auto& kv : coords_) kv.second *= s;
  return *this;
}

FinVector FinVector::operator-() const {
  FinVector r = *this;
  for (auto& kv : r.coords_) kv.second = -kv.second;
  return r;
}

FinVector restrict(const FinVector& v, const Interval& e) {
  FinVector r;
  for (auto it = v.coords().lower_bound(e.lo); it != v.end() && it->first <= e.hi; ++it)
    r.set(it->first, it->second);
  return r;
}

FinVector restrict_to(const FinVector& v, const std::vector<Index>& keep) {
  FinVector r;
  for (Index i : keep) {
    auto it = v.coords().find(i);
    if (it != v.end()) r.set(i, it->second);
  }
  return r;
}

Rational pair(const FinVector& f, const FinVector& x) {
  Rational s = 0;
  const auto& small = f.support_size() <= x.support_size() ? f : x;
  const auto& large = f.support_size() <= x.support_size() ? x : f;
  for (const auto& [i, v] : small) {
    auto it = large.coords().find(i);
    if (it != large.end()) s += v * it->second;
  }
  return s;
}

Rational norm_one(const FinVector& x) {
  Rational s = 0;
  for (const auto& kv : x) s += ::abs(kv.second);
  return s;
}

Rational norm_infty(const FinVector& x) {
  Rational m = 0;
  for (const auto& kv : x) {
    Rational a = ::abs(kv.second);
    if (a > m) m = a;
  }
  return m;
}

FinVector abs(const FinVector& v) {
  FinVector r;
  for (const auto& [i, c] : v) r.set(i, ::abs(c));
  return r;
}

bool block_before(const FinVector& u, const FinVector& v) {
  if (u.is_zero() || v.is_zero()) return true;
  return u.max_support() < v.min_support();
}

bool is_block_sequence(const std::vector<FinVector>& seq) {
  const FinVector* last = nullptr;
  for (const auto& v : seq) {
    if (v.is_zero()) continue;
    if (last && !block_before(*last, v)) return false;
    last = &v;
  }
  return true;
}

std::string to_string(const FinVector& v) {
  std::string out;
  bool first = true;
  for (const auto& [i, c] : v) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(i);
    out += ':';
    out += to_string(c);
  }
  return out;
}

FinVector parse_vector(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  FinVector v;
  if (text.empty()) return v;
  std::size_t pos = 0;
  for (;;) {
    auto comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) throw ParseError("empty entry in vector '" + std::string(text) + "'");
    auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("expected 'index:value' in '" + std::string(item) + "'");
    auto idx_text = item.substr(0, colon);
    Index idx = 0;
    auto [p, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
    if (ec != std::errc() || p != idx_text.data() + idx_text.size() || idx < 1)
      throw ParseError("invalid index '" + std::string(idx_text) + "'");
    if (v.get(idx) != 0) throw ParseError("duplicate index " + std::to_string(idx));
    v.add(idx, parse_rational(item.substr(colon + 1)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return v;
}

}  // namespace gms
