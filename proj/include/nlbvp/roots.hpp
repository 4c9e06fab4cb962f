#pragma once

// Bracketing root finder: Brent's method (inverse quadratic / secant with
// bisection fallback), generic over the scalar.

#include <stdexcept>
#include <utility>
#include <vector>

#include "nlbvp/scalar.hpp"

namespace nlbvp {

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finds a root of f in [a, b]; f(a) and f(b) must have opposite signs.
// Stops when the bracket width falls below xtol_abs + xtol_rel*|x|.
template <class T, class F>
T brent(F&& f, T a, T b, const T& xtol_abs, const T& xtol_rel, int max_iter = 200) {
  using std::abs;
  using std::min;
  const T zero = make_like(a, 0);
  const T two = make_like(a, 2);
  T fa = f(a), fb = f(b);
  if (fa == zero) return a;
  if (fb == zero) return b;
  if ((fa > zero) == (fb > zero)) throw BracketError("brent: endpoints do not bracket a root");
  T c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > zero) == (fc > zero)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (abs(fc) < abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    T tol1 = xtol_abs + xtol_rel * abs(b);
    T xm = (c - b) / two;
    if (abs(xm) <= tol1 || fb == zero) return b;
    if (abs(e) >= tol1 && abs(fa) > abs(fb)) {
      T s = fb / fa, p, q;
      if (a == c) {  // secant
        p = two * xm * s;
        q = make_like(a, 1) - s;
      } else {  // inverse quadratic
        T qa = fa / fc, r = fb / fc;
        p = s * (two * xm * qa * (qa - r) - (b - a) * (r - make_like(a, 1)));
        q = (qa - make_like(a, 1)) * (r - make_like(a, 1)) * (s - make_like(a, 1));
      }
      if (p > zero) q = -q;
      p = abs(p);
      if (two * p < min(make_like(a, 3) * xm * q - abs(tol1 * q), abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (abs(d) > tol1)
      b += d;
    else
      b += (xm > zero ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

// Scans [lo, hi] on n uniform nodes and returns every sub-interval whose
// endpoint values have opposite sign, in order.
template <class T, class F>
std::vector<std::pair<T, T>> sign_change_intervals(F&& f, const T& lo, const T& hi, int n) {
  const T zero = make_like(lo, 0);
  std::vector<std::pair<T, T>> out;
  T prev_x = lo, prev_f = f(lo);
  for (int i = 1; i < n; ++i) {
    T x = lo + (hi - lo) * make_like(lo, i) / make_like(lo, n - 1);
    T fx = f(x);
    bool prev_neg = prev_f < zero, cur_neg = fx < zero;
    if (prev_neg != cur_neg || prev_f == zero) out.emplace_back(prev_x, x);
    prev_x = x;
    prev_f = fx;
  }
  return out;
}

}  // namespace nlbvp
