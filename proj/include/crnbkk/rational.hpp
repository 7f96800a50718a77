#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crnbkk {

/// Exact rational number backed by GMP; always kept in canonical form.
using Rational = mpq_class;
using Integer = mpz_class;

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside a documented desk-scale guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(std::string_view text) {
  Rational q;
  if (q.set_str(std::string(text), 10) != 0) {
    throw Error("malformed rational: " + std::string(text));
  }
  if (q.get_den() == 0) throw Error("zero denominator: " + std::string(text));
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw Error("integer overflow converting " + z.get_str());
  return z.get_si();
}

inline std::int64_t to_int64(const Rational& q) {
  if (q.get_den() != 1) throw Error("expected integer, got " + q.get_str());
  return to_int64(q.get_num());
}

}  // namespace crnbkk
