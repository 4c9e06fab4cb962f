#pragma once

// Time integration of the phase system and one-dimensional quadrature with
// endpoint singularities.
//
// Two explicit engines share one driver:
//  - DormandPrince54: embedded 5(4) pair, the machine-precision workhorse.
//  - BulirschStoer: Gragg midpoint + polynomial extrapolation (even orders
//    up to 16), used when tolerances sit far below what an order-5 pair can
//    reach in a sane step count (extended-precision slope work).
// Both expose cubic-Hermite dense output on step endpoints, which also
// drives event location.

#include <cmath>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nlbvp/dynamics.hpp"
#include "nlbvp/roots.hpp"
#include "nlbvp/scalar.hpp"

namespace nlbvp {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergenceError : SolverError {
  using SolverError::SolverError;
};
struct BlowUpError : SolverError {
  // sign of y in the last finite-ish state, for the saturated-residual rule
  int y_direction;
  BlowUpError(const std::string& what, int dir) : SolverError(what), y_direction(dir) {}
};
struct NoCrossingError : SolverError {
  using SolverError::SolverError;
};
struct QuadratureError : SolverError {
  using SolverError::SolverError;
};

enum class Engine { DormandPrince54, BulirschStoer };

template <class T>
struct IntegratorConfig {
  T rel_tol;
  T abs_tol;
  long max_steps = 400000;
  bool dense_output = false;
  bool record = true;  // keep per-step samples in the trajectory
  Engine engine = Engine::DormandPrince54;

  static IntegratorConfig defaults_for(const T& like) {
    IntegratorConfig cfg{make_like(like, 0), make_like(like, 0)};
    int d = digits10_of(like);
    if (d <= 16) {
      cfg.rel_tol = make_like(like, 1e-10);
      cfg.abs_tol = make_like(like, 1e-12);
      cfg.engine = Engine::DormandPrince54;
    } else {
      cfg.rel_tol = pow10_like(like, 8 - d);
      cfg.abs_tol = pow10_like(like, 4 - d);
      cfg.engine = Engine::BulirschStoer;
    }
    return cfg;
  }

  void validate() const {
    if (!(rel_tol > make_like(rel_tol, 0)) || !(abs_tol > make_like(abs_tol, 0)))
      throw std::domain_error("IntegratorConfig: tolerances must be positive");
    if (max_steps <= 0) throw std::domain_error("IntegratorConfig: max_steps must be positive");
  }
};

template <class T>
struct EventRecord {
  std::string description;
  T t;
};

template <class T>
struct TrajectorySample {
  T t;
  PhasePoint<T> p;
};

template <class T>
struct Trajectory {
  std::vector<TrajectorySample<T>> samples;  // t strictly increasing, first t = 0
  Params<T> params;
  std::optional<EventRecord<T>> terminal_event;

  struct Segment {
    T t0, t1;
    PhasePoint<T> p0, p1, f0, f1;
  };
  std::vector<Segment> segments;  // populated iff dense output was enabled

  const PhasePoint<T>& initial_state() const { return samples.front().p; }
  const PhasePoint<T>& final_state() const { return samples.back().p; }
  const T& final_time() const { return samples.back().t; }

  static PhasePoint<T> hermite(const Segment& s, const T& t) {
    T h = s.t1 - s.t0;
    T th = (t - s.t0) / h;
    T th2 = th * th, th3 = th2 * th;
    T h00 = 2 * th3 - 3 * th2 + make_like(t, 1);
    T h10 = th3 - 2 * th2 + th;
    T h01 = -2 * th3 + 3 * th2;
    T h11 = th3 - th2;
    return {h00 * s.p0.y + h10 * h * s.f0.y + h01 * s.p1.y + h11 * h * s.f1.y,
            h00 * s.p0.z + h10 * h * s.f0.z + h01 * s.p1.z + h11 * h * s.f1.z};
  }

  // Cubic-Hermite evaluation anywhere in the integrated range.
  PhasePoint<T> at(const T& t) const {
    if (segments.empty()) throw std::logic_error("Trajectory::at requires dense output");
    size_t lo = 0, hi = segments.size();
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      if (segments[mid].t0 <= t)
        lo = mid;
      else
        hi = mid;
    }
    return hermite(segments[lo], t);
  }
};

namespace detail {

// err^(-1/n) for step controllers.
template <class T>
T err_root_inv(const T& err, int n) {
  using std::exp;
  using std::log;
  if (!(err > make_like(err, 0))) return make_like(err, 10);
  return exp(-log(err) / make_like(err, n));
}

template <class T>
T err_weight(const T& e, const T& y0, const T& y1, const IntegratorConfig<T>& cfg) {
  using std::abs;
  using std::max;
  return abs(e) / (cfg.abs_tol + cfg.rel_tol * max(abs(y0), abs(y1)));
}

template <class T>
void check_finite(const PhasePoint<T>& p) {
  using std::abs;
  using std::isfinite;
  // legitimate trajectories at solver scales keep |y|, |z| below ~1e4; far
  // beyond that the loop timescale eps/|y| underflows any step size
  if (!isfinite(p.y) || !isfinite(p.z) || abs(p.z) > pow10_like(p.z, 15) ||
      abs(p.y) > pow10_like(p.y, 15)) {
    const T zero = make_like(p.z, 0);
    int dir;
    if (abs(p.y) > abs(p.z))
      dir = p.y < zero ? -1 : 1;
    else
      dir = p.z < zero ? -1 : 1;
    throw BlowUpError("integrate: state blow-up", dir);
  }
}

// One Dormand-Prince 5(4) trial step (exact rational tableau). Returns the
// scaled error; fills p_new and f_new (FSAL derivative at the new point).
template <class T, class Sys>
T dopri5_step(Sys&& sys, const T& t, const PhasePoint<T>& p, const PhasePoint<T>& f0, const T& h,
              const IntegratorConfig<T>& cfg, PhasePoint<T>& p_new, PhasePoint<T>& f_new) {
  using std::max;
  auto lin = [&](std::initializer_list<std::pair<long, const PhasePoint<T>*>> terms, long den) {
    T ay = make_like(t, 0), az = make_like(t, 0);
    for (const auto& [num, k] : terms) {
      T c = make_like(t, num) / make_like(t, den);
      ay += c * k->y;
      az += c * k->z;
    }
    return PhasePoint<T>{p.y + h * ay, p.z + h * az};
  };
  PhasePoint<T> k1 = f0;
  PhasePoint<T> k2 = sys(t + h / make_like(t, 5), lin({{1, &k1}}, 5));
  PhasePoint<T> k3 =
      sys(t + h * make_like(t, 3) / make_like(t, 10), lin({{3, &k1}, {9, &k2}}, 40));
  PhasePoint<T> k4 =
      sys(t + h * make_like(t, 4) / make_like(t, 5), lin({{44, &k1}, {-168, &k2}, {160, &k3}}, 45));
  PhasePoint<T> k5 = sys(t + h * make_like(t, 8) / make_like(t, 9),
                         lin({{19372, &k1}, {-76080, &k2}, {64448, &k3}, {-1908, &k4}}, 6561));
  PhasePoint<T> k6 =
      sys(t + h, lin({{477901, &k1}, {-1806240, &k2}, {1495424, &k3}, {46746, &k4}, {-45927, &k5}},
                     167904));
  p_new = lin({{12985, &k1}, {64000, &k3}, {92750, &k4}, {-45927, &k5}, {18656, &k6}}, 142464);
  f_new = sys(t + h, p_new);
  auto ecomb = [&](T PhasePoint<T>::* m) {
    T acc = make_like(t, 71) / make_like(t, 57600) * (k1.*m) -
            make_like(t, 71) / make_like(t, 16695) * (k3.*m) +
            make_like(t, 71) / make_like(t, 1920) * (k4.*m) -
            make_like(t, 17253) / make_like(t, 339200) * (k5.*m) +
            make_like(t, 22) / make_like(t, 525) * (k6.*m) -
            make_like(t, 1) / make_like(t, 40) * (f_new.*m);
    return h * acc;
  };
  return max(err_weight(ecomb(&PhasePoint<T>::y), p.y, p_new.y, cfg),
             err_weight(ecomb(&PhasePoint<T>::z), p.z, p_new.z, cfg));
}

// Gragg modified midpoint with n substeps followed by Neville extrapolation
// in h^2. Fills p_new; sets k_used to the converged level. Returns the
// scaled error (> 1 when no level converged).
template <class T, class Sys>
T bs_step(Sys&& sys, const T& t, const PhasePoint<T>& p, const PhasePoint<T>& f0, const T& H,
          const IntegratorConfig<T>& cfg, PhasePoint<T>& p_new, int& k_used) {
  using std::max;
  static constexpr int kSeq[] = {2, 4, 6, 8, 10, 12, 14, 16};
  static constexpr int kLevels = 8;
  PhasePoint<T> tab[kLevels];
  T err = make_like(t, 2);
  for (int k = 0; k < kLevels; ++k) {
    const int n = kSeq[k];
    T h = H / make_like(t, n);
    PhasePoint<T> z0 = p;
    PhasePoint<T> z1{p.y + h * f0.y, p.z + h * f0.z};
    PhasePoint<T> fk = sys(t + h, z1);
    for (int m = 1; m < n; ++m) {
      PhasePoint<T> z2{z0.y + 2 * h * fk.y, z0.z + 2 * h * fk.z};
      z0 = z1;
      z1 = z2;
      fk = sys(t + (m + 1) * h, z1);
    }
    tab[k] = {(z1.y + z0.y + h * fk.y) / make_like(t, 2),
              (z1.z + z0.z + h * fk.z) / make_like(t, 2)};
    {
      using std::isfinite;
      if (!isfinite(tab[k].y) || !isfinite(tab[k].z)) {  // midpoint run exploded: reject
        p_new = p;
        k_used = k;
        return pow10_like(t, 30);
      }
    }
    for (int j = k - 1; j >= 0; --j) {
      T r = make_like(t, kSeq[k]) / make_like(t, kSeq[j]);
      T fac = r * r - make_like(t, 1);
      tab[j] = {tab[j + 1].y + (tab[j + 1].y - tab[j].y) / fac,
                tab[j + 1].z + (tab[j + 1].z - tab[j].z) / fac};
    }
    if (k >= 2) {
      err = max(err_weight(tab[0].y - tab[1].y, p.y, tab[0].y, cfg),
                err_weight(tab[0].z - tab[1].z, p.z, tab[0].z, cfg));
      if (err <= make_like(t, 1)) {
        p_new = tab[0];
        k_used = k;
        return err;
      }
    }
  }
  p_new = tab[0];
  k_used = kLevels - 1;
  return err;
}

}  // namespace detail

template <class T>
struct PhaseSystem {
  Params<T> params;
  PhasePoint<T> operator()(const T& /*t*/, const PhasePoint<T>& p) const { return rhs(p, params); }
};

// Shared adaptive driver. Integrates from t = 0 until t_end (clipping the
// last step exactly) or until y crosses event_y. `checkpoints` are mandatory
// intermediate landing times (strictly increasing, within (0, t_end)); the
// driver lands on each exactly and records a sample there.
template <class T, class Sys>
Trajectory<T> integrate_driver(Sys&& sys, const PhasePoint<T>& p0, const Params<T>& params,
                               const IntegratorConfig<T>& cfg,
                               std::optional<std::type_identity_t<T>> t_end,
                               std::optional<std::type_identity_t<T>> event_y,
                               const std::vector<std::type_identity_t<T>>& checkpoints = {}) {
  using std::abs;
  using std::max;
  using std::min;
  cfg.validate();
  const T zero = make_like(params.epsilon, 0);
  const T one = make_like(params.epsilon, 1);
  if (t_end && !(*t_end > zero)) throw std::domain_error("integrate: t_end must be positive");

  Trajectory<T> traj{{}, params, std::nullopt, {}};
  detail::check_finite(p0);
  traj.samples.push_back({zero, p0});

  const T horizon = t_end ? *t_end : make_like(params.epsilon, 50);
  size_t next_cp = 0;

  PhasePoint<T> p = p0;
  PhasePoint<T> f = sys(zero, p);
  T t = zero;
  T h = (cfg.engine == Engine::BulirschStoer)
            ? min(horizon / make_like(horizon, 20), make_like(horizon, 0.05))
            : horizon * make_like(horizon, 1e-4);
  const T h_min = horizon * pow10_like(horizon, -digits10_of(horizon) - 4);

  long steps = 0;
  while (true) {
    if (++steps > cfg.max_steps)
      throw NonConvergenceError("integrate: step budget exhausted (max_steps)");
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t) ++next_cp;

    int clip = 0;  // 1 = checkpoint, 2 = horizon
    if (next_cp < checkpoints.size() && t + h >= checkpoints[next_cp]) {
      h = checkpoints[next_cp] - t;
      clip = 1;
    } else if (t + h >= horizon) {
      h = horizon - t;
      clip = 2;
    }
    if (h < h_min && clip == 0) throw NonConvergenceError("integrate: step size underflow");

    PhasePoint<T> p_new, f_new;
    int k_used = 0;
    T err;
    if (cfg.engine == Engine::DormandPrince54) {
      err = detail::dopri5_step(sys, t, p, f, h, cfg, p_new, f_new);
    } else {
      err = detail::bs_step(sys, t, p, f, h, cfg, p_new, k_used);
    }

    if (!(err <= one)) {
      using std::isfinite;
      T shrink = make_like(err, 0.25);
      if (cfg.engine == Engine::DormandPrince54 && isfinite(err))
        shrink = max(make_like(err, 0.2), make_like(err, 0.9) * detail::err_root_inv(err, 5));
      h = h * shrink;
      continue;
    }
    detail::check_finite(p_new);
    T t_new = t + h;
    if (clip == 1) t_new = checkpoints[next_cp];
    if (clip == 2) t_new = horizon;

    if (cfg.engine == Engine::BulirschStoer && (cfg.dense_output || event_y))
      f_new = sys(t_new, p_new);

    if (event_y) {
      T v0 = p.y - *event_y, v1 = p_new.y - *event_y;
      if ((v0 < zero) != (v1 < zero) || v1 == zero) {
        typename Trajectory<T>::Segment seg{t, t_new, p, p_new, f, f_new};
        T t_star = t_new;
        if (v1 != zero) {
          auto ev = [&](const T& tt) { return Trajectory<T>::hermite(seg, tt).y - *event_y; };
          t_star = brent<T>(ev, t, t_new, cfg.rel_tol * h, cfg.rel_tol);
        }
        PhasePoint<T> p_star = Trajectory<T>::hermite(seg, t_star);
        if (cfg.dense_output) {
          seg.t1 = t_star;
          seg.p1 = p_star;
          seg.f1 = sys(t_star, p_star);
          traj.segments.push_back(seg);
        }
        traj.samples.push_back({t_star, p_star});
        traj.terminal_event = EventRecord<T>{"y crossing", t_star};
        return traj;
      }
    }

    if (cfg.dense_output) traj.segments.push_back({t, t_new, p, p_new, f, f_new});
    bool final_step = t_end && clip == 2;
    if (clip == 1) ++next_cp;
    if (cfg.record || clip != 0 || final_step) traj.samples.push_back({t_new, p_new});

    if (final_step) return traj;
    if (!t_end && t_new >= horizon)
      throw NoCrossingError("integrate: no event crossing before time horizon");

    if (cfg.engine == Engine::DormandPrince54) {
      f = f_new;
      h = h * min(make_like(err, 5),
                  max(make_like(err, 0.2), make_like(err, 0.9) * detail::err_root_inv(err, 5)));
    } else {
      f = (cfg.dense_output || event_y) ? f_new : sys(t_new, p_new);
      int ord = 2 * (k_used + 1) + 1;
      h = h * min(make_like(err, 4),
                  max(make_like(err, 0.1),
                      make_like(err, 0.85) * detail::err_root_inv(err, ord)));
    }
    t = t_new;
    p = p_new;
  }
}

// Integrates from t = 0 to exactly t_end (the last step is clipped).
template <class T>
Trajectory<T> integrate_to_time(const PhasePoint<T>& p0, const T& t_end, const Params<T>& params,
                                const IntegratorConfig<T>& cfg) {
  return integrate_driver(PhaseSystem<T>{params}, p0, params, cfg, t_end, std::nullopt);
}

// Same, with mandatory intermediate sample times (strictly increasing,
// inside (0, t_end)); the integrator lands on each exactly and records it.
template <class T>
Trajectory<T> integrate_to_time(const PhasePoint<T>& p0, const T& t_end, const Params<T>& params,
                                const IntegratorConfig<T>& cfg, const std::vector<T>& t_samples) {
  return integrate_driver(PhaseSystem<T>{params}, p0, params, cfg, t_end, std::nullopt, t_samples);
}

// Runs until the first crossing of y = event_y; the crossing time is located
// on the dense interpolant to rel_tol. Throws NoCrossingError when the step
// budget or the time horizon runs out first.
template <class T>
Trajectory<T> integrate_to_event(const PhasePoint<T>& p0, const T& event_y,
                                 const Params<T>& params, const IntegratorConfig<T>& cfg) {
  return integrate_driver(PhaseSystem<T>{params}, p0, params, cfg, std::nullopt, event_y);
}

enum class SingularEnd { Left, Right, None };

// Tanh-sinh (double-exponential) quadrature of f over [a, b], tolerant of an
// inverse-square-root endpoint singularity. The integrand is called as
// f(x, d) with d the exact distance to the singular endpoint (to the nearer
// endpoint when end == None), so integrands can cancel against the endpoint
// without losing precision. The error target is absolute.
template <class T, class F>
T quad_singular(F&& f, const T& a, const T& b, SingularEnd end, const T& tol) {
  using std::abs;
  using std::cosh;
  using std::exp;
  using std::min;
  using std::sinh;
  if (!(tol > make_like(a, 0))) throw std::domain_error("quad_singular: tol must be positive");
  const T one = make_like(a, 1);
  const T two = make_like(a, 2);
  const T half_pi = pi_like(a) / two;
  const T s = (b - a) / two;
  const int digits = digits10_of(a);
  // weights underflow once (pi/2) sinh(t) exceeds ~digits*ln(10)
  const T t_max = make_like(a, std::asinh(((digits + 12) * 2.302585092994046) / 1.5707963267948966));

  auto node = [&](const T& tt, T& x, T& dist, T& w) {
    T u = half_pi * sinh(tt);
    T sech_u = sech(u);
    w = s * half_pi * cosh(tt) * sech_u * sech_u;
    T e2 = exp(-two * abs(u));
    T near_small = two * s * e2 / (one + e2);  // distance to the endpoint u points at
    T near_large = two * s / (one + e2);
    bool upper = u > make_like(a, 0);
    T dist_a = upper ? near_large : near_small;
    T dist_b = upper ? near_small : near_large;
    if (end == SingularEnd::Left) {
      dist = dist_a;
      x = a + dist_a;
    } else if (end == SingularEnd::Right) {
      dist = dist_b;
      x = b - dist_b;
    } else {
      dist = min(dist_a, dist_b);
      x = a + dist_a;
    }
  };

  auto eval_row = [&](const T& h, bool odd_only) {
    T acc = make_like(a, 0);
    const long stride = odd_only ? 2 : 1;
    for (int dir = 0; dir < 2; ++dir) {
      long k = odd_only ? 1 : (dir == 0 ? 0 : 1);
      int dropped = 0;
      for (;; k += stride) {
        T tt = make_like(a, dir == 0 ? k : -k) * h;
        if (abs(tt) > t_max) break;
        T x, dist, w;
        node(tt, x, dist, w);
        T term = w * f(x, dist);
        acc += term;
        if (abs(term) <= tol * make_like(a, 1e-4)) {
          if (++dropped >= 3) break;
        } else {
          dropped = 0;
        }
      }
    }
    return acc;
  };

  T h = one;
  T sum = eval_row(h, false);
  T integral = h * sum;
  for (int level = 1; level <= 12; ++level) {
    h = h / two;
    sum += eval_row(h, true);
    T next = h * sum;
    if (level >= 2 && abs(next - integral) <= tol) return next;
    integral = next;
  }
  throw QuadratureError("quad_singular: refinement budget exhausted");
}

}  // namespace nlbvp
