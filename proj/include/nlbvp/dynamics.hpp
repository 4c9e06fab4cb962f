#pragma once

// The first-order system y' = z, z' = y(z-1)/eps, its conserved label
// C^2 = y^2 - 2 eps [z + log(1-z)], the reversibility symmetry, and the
// Hamiltonian form in (Q, P) = (y, log(1-z)).

#include <optional>
#include <stdexcept>
#include <utility>

#include "nlbvp/scalar.hpp"
#include "nlbvp/special.hpp"

namespace nlbvp {

template <class T>
struct Params {
  T epsilon;
  explicit Params(T eps) : epsilon(std::move(eps)) {
    if (!(epsilon > make_like(epsilon, 0)))
      throw std::domain_error("Params: epsilon must be positive");
  }
};

template <class T>
struct PhasePoint {
  T y;
  T z;
};

template <class T>
struct ConservedLabel {
  T c_squared;
};

template <class T>
PhasePoint<T> rhs(const PhasePoint<T>& p, const Params<T>& params) {
  return {p.z, p.y * (p.z - make_like(p.y, 1)) / params.epsilon};
}

// f(z) = z + log(1-z), the slope function of the conserved relation.
// Defined for z < 1, global maximum f(0) = 0.
template <class T>
T slope_function(const T& z) {
  if (!(z < make_like(z, 1))) throw std::domain_error("slope_function: requires z < 1");
  return z + log1p(-z);
}

template <class T>
ConservedLabel<T> conserved(const PhasePoint<T>& p, const Params<T>& params) {
  if (!(p.z < make_like(p.z, 1)))
    throw std::domain_error("conserved: label defined only for z < 1");
  return {p.y * p.y - make_like(p.y, 2) * params.epsilon * slope_function(p.z)};
}

// Inverts the conserved relation for z at a given y, using the requested
// Lambert W branch: z = 1 + W_n(-exp(-1 + (y^2 - C^2)/(2 eps))).
// Principal selects the arc with 0 <= z < 1, Lower the arc with z <= 0.
// Returns nullopt when the trajectory labelled C^2 never reaches that y on
// that branch (W argument would leave [-1/e, 0)).
template <class T>
std::optional<T> z_of_y(const T& y, const ConservedLabel<T>& label, const Params<T>& params,
                        WBranch branch) {
  using std::exp;
  const T one = make_like(y, 1);
  T expo = (y * y - label.c_squared) / (make_like(y, 2) * params.epsilon);
  if (expo > make_like(y, 0)) return std::nullopt;  // |y| beyond the turning point
  T arg = -exp(expo - one);
  return one + lambert_w(arg, branch);
}

// Phase-space half of the reversibility symmetry (x,y) -> (1-x,-y):
// (y, z) -> (-y, z). An involution.
template <class T>
PhasePoint<T> symmetry_map(const PhasePoint<T>& p) {
  return {-p.y, p.z};
}

// Graph half of the same symmetry: (x, y) -> (1-x, -y).
template <class T>
std::pair<T, T> curve_symmetry(const T& x, const T& y) {
  return {make_like(x, 1) - x, -y};
}

// H(P, Q) = P - e^P - Q^2/(2 eps) with Q = y, P = log(1-z).
// Affinely related to the conserved label: H = -1 - C^2/(2 eps).
template <class T>
T hamiltonian(const PhasePoint<T>& p, const Params<T>& params) {
  using std::exp;
  if (!(p.z < make_like(p.z, 1)))
    throw std::domain_error("hamiltonian: defined only for z < 1");
  T P = log1p(-p.z);
  T Q = p.y;
  return P - exp(P) - Q * Q / (make_like(p.y, 2) * params.epsilon);
}

}  // namespace nlbvp
