#pragma once

// Exact scalar types shared by every module. All arithmetic in this library
// is exact: big integers and big rationals, no floating point anywhere.

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>

namespace chowcert {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

// Raised when a caller violates a documented precondition (bad parameters,
// out-of-range indices, malformed input). The CLI maps this to exit code 2.
class precondition_error : public std::runtime_error {
 public:
  explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a computation that is supposed to succeed for valid inputs
// reaches an inconsistent state (a checked identity fails, a kernel system
// has no solution). The CLI maps this to exit code 1.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Serialization format for rationals: "p" when the denominator is 1,
// otherwise "p/q" with q > 0 and gcd(p, q) = 1 (mpq_rational keeps entries
// canonical). Reports never emit rationals as JSON numbers.
inline std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw precondition_error("empty rational literal");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw precondition_error("zero denominator in rational literal");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw precondition_error("malformed rational literal: " + s);
  }
}

inline long mod_norm(long x, long n) {
  long r = x % n;
  return r < 0 ? r + n : r;
}

}  // namespace chowcert
