#pragma once

// Lambert W (principal and lower real branches) and the real dilogarithm,
// generic over the scalar kernel. Both are driven to the precision of their
// input, so the same code serves machine-precision scans and 50-digit
// slope-transfer work.

#include <cmath>
#include <stdexcept>

#include "nlbvp/scalar.hpp"

namespace nlbvp {

enum class WBranch { Principal, Lower };

namespace detail {

// Halley iteration on F(w) = w e^w - x.
template <class T>
T lambert_w_polish(T w, const T& x, bool lower) {
  using std::abs;
  using std::exp;
  using std::max;
  const T one = make_like(x, 1);
  const T tol = pow10_like(x, 1 - digits10_of(x));
  for (int it = 0; it < 200; ++it) {
    T ew = exp(w);
    T f = w * ew - x;
    if (f == make_like(x, 0)) break;
    T wp1 = w + one;
    if (abs(wp1) == make_like(x, 0)) break;  // at the branch point
    T denom = ew * wp1 - (w + make_like(x, 2)) * f / (make_like(x, 2) * wp1);
    T dw = f / denom;
    T wn = w - dw;
    if (lower && wn > -one) wn = (w - one) / make_like(x, 2);  // stay on w <= -1
    w = wn;
    if (abs(dw) <= tol * max(abs(w), tol)) break;
  }
  return w;
}

}  // namespace detail

// Solves w e^w = x on the requested real branch.
//   Principal: x >= -1/e, w >= -1.
//   Lower:     -1/e <= x < 0, w <= -1.
template <class T>
T lambert_w(const T& x, WBranch branch) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::sqrt;
  const T zero = make_like(x, 0);
  const T one = make_like(x, 1);
  const T lim = -exp(-one);  // -1/e at working precision
  const T slack = pow10_like(x, 3 - digits10_of(x));
  if (x < lim * (one + slack))
    throw std::domain_error("lambert_w: argument below -1/e");
  T w;
  if (branch == WBranch::Principal) {
    if (x == zero) return zero;
    if (abs(x) < make_like(x, 0.05)) {
      // W0(x) = x - x^2 + (3/2)x^3 + O(x^4)
      w = x * (one - x * (one - make_like(x, 1.5) * x));
    } else if (x < make_like(x, -0.25)) {
      T p2 = make_like(x, 2) * (exp(one) * x + one);
      if (p2 < zero) p2 = zero;
      T p = sqrt(p2);
      w = -one + p - p2 / make_like(x, 3) + make_like(x, 11) / make_like(x, 72) * p * p2;
    } else if (x > make_like(x, 2)) {
      T l1 = log(x);
      T l2 = log(l1);
      w = l1 - l2 + l2 / l1;
    } else {
      w = log1p(x);
    }
    return detail::lambert_w_polish(w, x, false);
  }
  if (x >= zero) throw std::domain_error("lambert_w: lower branch requires x < 0");
  if (x > make_like(x, -0.1)) {
    T l1 = log(-x);
    T l2 = log(-l1);
    w = l1 - l2 + l2 / l1;
  } else {
    T p2 = make_like(x, 2) * (exp(one) * x + one);
    if (p2 < zero) p2 = zero;
    T p = sqrt(p2);
    w = -one - p - p2 / make_like(x, 3) - make_like(x, 11) / make_like(x, 72) * p * p2;
  }
  return detail::lambert_w_polish(w, x, true);
}

namespace detail {

// Power series sum_{k>=1} x^k / k^2, for |x| <= 1/2.
template <class T>
T dilog_series(const T& x) {
  using std::abs;
  const T tol = pow10_like(x, -digits10_of(x) - 2);
  T sum = make_like(x, 0);
  T xk = make_like(x, 1);
  for (long k = 1; k < 4000; ++k) {
    xk = xk * x;
    T term = xk / make_like(x, k * k);
    sum += term;
    if (abs(term) <= tol * (abs(sum) + tol)) break;
  }
  return sum;
}

}  // namespace detail

// Real dilogarithm Li2(x) for x <= 1. Series inside |x| <= 1/2, standard
// reflection (x -> 1-x), Landen (x -> x/(x-1)) and inversion (x -> 1/x)
// identities elsewhere.
template <class T>
T dilog(const T& x) {
  using std::log;
  const T zero = make_like(x, 0);
  const T one = make_like(x, 1);
  const T half = one / make_like(x, 2);
  if (x > one) throw std::domain_error("dilog: real dilogarithm requires x <= 1");
  const T pi2_6 = pi_like(x) * pi_like(x) / make_like(x, 6);
  if (x == one) return pi2_6;
  if (x >= half) {
    T omx = one - x;
    T corr = (omx == zero) ? zero : log(x) * log(omx);
    return pi2_6 - corr - detail::dilog_series(omx);
  }
  if (x >= -half) return detail::dilog_series(x);
  if (x >= -one) {
    T u = x / (x - one);  // in [1/3, 1/2]
    T l = log1p(-x);
    return -detail::dilog_series(u) - half * l * l;
  }
  // x < -1: invert to 1/x in (-1, 0)
  T inv = one / x;
  T linv = log(-x);
  T li_inv = (inv >= -half) ? detail::dilog_series(inv)
                            : [&] {
                                T u = inv / (inv - one);
                                T l = log1p(-inv);
                                return -detail::dilog_series(u) - half * l * l;
                              }();
  return -pi2_6 - half * linv * linv - li_inv;
}

}  // namespace nlbvp
