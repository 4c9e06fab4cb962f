#pragma once

// Helpers that let the numerical modules run unchanged on `double` and on
// HPReal. Generic code derives constants and tolerances from an existing
// value (`make_like`, `pi_like`, `pow10_like`) so that extended-precision
// inputs never get silently mixed with low-precision temporaries.

#include <cmath>
#include <string>

#include "nlbvp/hpreal.hpp"

namespace nlbvp {

inline double make_like(double /*like*/, long v) { return static_cast<double>(v); }
inline double make_like(double /*like*/, int v) { return v; }
inline double make_like(double /*like*/, double v) { return v; }

inline HPReal make_like(const HPReal& like, long v) {
  return HPReal::with_digits(v, like.precision_digits());
}
inline HPReal make_like(const HPReal& like, int v) {
  return HPReal::with_digits(v, like.precision_digits());
}
inline HPReal make_like(const HPReal& like, double v) {
  HPReal r = HPReal::with_digits(0, like.precision_digits());
  return r + HPReal(v);
}

inline double pi_like(double /*like*/) { return M_PI; }
inline HPReal pi_like(const HPReal& like) { return HPReal::pi(like.precision_digits()); }

// 10^e at the precision of `like`, for tolerance construction.
inline double pow10_like(double /*like*/, int e) { return std::pow(10.0, e); }
inline HPReal pow10_like(const HPReal& like, int e) {
  HPReal ten = make_like(like, 10);
  return e >= 0 ? pow(ten, e) : make_like(like, 1) / pow(ten, -e);
}

inline int digits10_of(double /*x*/) { return 16; }
inline int digits10_of(const HPReal& x) { return x.precision_digits(); }

inline double to_double(double x) { return x; }
inline double to_double(const HPReal& x) { return x.to_double(); }

inline std::string scalar_str(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
inline std::string scalar_str(const HPReal& x) { return x.str(); }

inline double sech(double x) { return 1.0 / std::cosh(x); }

inline double scalar_from_string(const std::string& s, double /*like*/) { return std::stod(s); }
inline HPReal scalar_from_string(const std::string& s, const HPReal& like) {
  return HPReal(s, like.precision_digits());
}

}  // namespace nlbvp
