#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gms {

using Integer = mpz_class;
using Rational = mpq_class;
using Index = std::int64_t;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (vectors, rationals, certificates, configs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A configured cap or search budget was exceeded. Never means "wrong answer".
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Parses "p", "-p" or "p/q" (q > 0 after sign normalisation).
Rational parse_rational(std::string_view text);

/// Always "num/den", den >= 1, reduced.
std::string to_string(const Rational& q);

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational abs(const Rational& q) { return Rational(::abs(q)); }

}  // namespace gms
