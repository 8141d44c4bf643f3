#ifndef MUKSTAB_RATIONAL_HPP
#define MUKSTAB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "mukstab/errors.hpp"

namespace mukstab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline std::vector<double> to_double(const RatVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const IntVec& a, const RatVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

// Reduces an integer vector to its primitive representative (gcd of entries 1,
// zero vector left untouched). Returns the gcd that was divided out.
inline Int make_primitive(IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) return 0;
  for (Int& x : v) x /= g;
  return g;
}

// Clears denominators of a rational vector: returns the primitive integer
// vector proportional to v and the positive rational scale s with v = s * out.
inline IntVec clear_denominators(const RatVec& v, Rat* scale = nullptr) {
  Int lcm = 1;
  for (const Rat& r : v) {
    Int den = boost::multiprecision::denominator(r);
    lcm = boost::multiprecision::lcm(lcm, den);
  }
  IntVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat scaled = v[i] * Rat(lcm);
    out[i] = boost::multiprecision::numerator(scaled);
  }
  Int g = make_primitive(out);
  if (scale) *scale = (g == 0) ? Rat(0) : Rat(g, lcm);
  return out;
}

// Parses "p/q", "p", or "-p/q". Throws ParseError on malformed text.
Rat parse_rational(const std::string& s);

// Canonical text form: "p" when the denominator is 1, else "p/q".
std::string format_rational(const Rat& r);

}  // namespace mukstab

#endif
