#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gms/rational.hpp"

namespace gms {

/// Closed interval [lo, hi] of positive integers.
struct Interval {
  Index lo = 1;
  Index hi = 1;

  Interval() = default;
  Interval(Index l, Index h);

  bool contains(Index i) const { return lo <= i && i <= hi; }
  Index length() const { return hi - lo + 1; }
  /// kE = [k lo, k hi].
  Interval scaled(Index k) const { return {k * lo, k * hi}; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

std::optional<Interval> intersect(const Interval& a, const Interval& b);

/// A finitely supported sequence of rationals, 1-based, used both as a
/// vector x and as a functional f. Zero coordinates are never stored.
class FinVector {
 public:
  using Map = std::map<Index, Rational>;
  using const_iterator = Map::const_iterator;

  FinVector() = default;
  FinVector(std::initializer_list<std::pair<const Index, Rational>> init);

  /// Unit vector e_i (or e_i^*).
  static FinVector unit(Index i, const Rational& value = 1);

  Rational get(Index i) const;
  void set(Index i, const Rational& value);
  void add(Index i, const Rational& value);

  bool is_zero() const { return coords_.empty(); }
  std::size_t support_size() const { return coords_.size(); }
  std::vector<Index> support() const;
  Index min_support() const;
  Index max_support() const;
  std::optional<Interval> range() const;

  const_iterator begin() const { return coords_.begin(); }
  const_iterator end() const { return coords_.end(); }
  const Map& coords() const { return coords_; }

  FinVector& operator+=(const FinVector& other);
  FinVector& operator-=(const FinVector& other);
  FinVector& operator*=(const Rational& s);

  friend FinVector operator+(FinVector a, const FinVector& b) { return a += b; }
  friend FinVector operator-(FinVector a, const FinVector& b) { return a -= b; }
  friend FinVector operator*(const Rational& s, FinVector v) { return v *= s; }
  FinVector operator-() const;

  friend bool operator==(const FinVector& a, const FinVector& b) {
    return a.coords_ == b.coords_;
  }

 private:
  Map coords_;
};

/// Ev: keeps coordinates inside E.
FinVector restrict(const FinVector& v, const Interval& e);
/// Coordinates of v at indices present in `keep` (a sorted support list).
FinVector restrict_to(const FinVector& v, const std::vector<Index>& keep);

/// f(x) = sum_i f_i x_i.
Rational pair(const FinVector& f, const FinVector& x);

Rational norm_one(const FinVector& x);
Rational norm_infty(const FinVector& x);

/// Coordinate-wise absolute value.
FinVector abs(const FinVector& v);

/// u < v: max supp u < min supp v. Zero vectors are vacuously block.
bool block_before(const FinVector& u, const FinVector& v);
/// Nonzero members are block in the given order.
bool is_block_sequence(const std::vector<FinVector>& seq);

/// "i:num/den" comma separated, sorted by index, e.g. "1:1/1,3:-1/2".
std::string to_string(const FinVector& v);
/// Accepts "i:p" or "i:p/q" pairs separated by commas; empty string is 0.
FinVector parse_vector(std::string_view text);

}  // namespace gms
