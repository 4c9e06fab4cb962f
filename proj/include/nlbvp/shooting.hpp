#pragma once

// Shooting solver for the boundary-value problem: the target function
// y(1) + 1 as a function of the trial initial slope, bracketing seeded by
// the asymptotic slope formulas, and error profiles of the composites
// against converged numerical solutions.
//
// For M and B1 the root is polished in u = 1 - s with logarithmic
// bracketing around the predicted transcendentally small value; in s itself
// those roots sit closer to 1 than machine epsilon once eps is small.

#include <stdexcept>
#include <utility>
#include <vector>

#include "nlbvp/asymptotics.hpp"
#include "nlbvp/integrate.hpp"
#include "nlbvp/parallel.hpp"
#include "nlbvp/roots.hpp"

namespace nlbvp {

template <class T>
struct ShootResult {
  T initial_slope;
  T final_y;
  T residual;  // final_y + 1
  bool above_invariant_line = false;
  bool saturated = false;
  Trajectory<T> trajectory;
};

template <class T>
struct BranchSolution {
  Branch branch;
  T initial_slope;
  T final_slope;
  Trajectory<T> trajectory;
  T epsilon;
  bool merged = false;  // single solution at eps >= eps_c returned for any tag
};

// Integrates from (1, s) to t = 1 and reports the far-boundary residual.
// Blow-up is reported as a saturated residual with the sign of the last
// state's y, which keeps bracketing monotone for wild trial slopes.
template <class T>
ShootResult<T> target(const T& s, const Params<T>& params, const IntegratorConfig<T>& cfg) {
  const T one = make_like(s, 1);
  PhasePoint<T> p0{one, s};
  try {
    Trajectory<T> traj = integrate_to_time(p0, one, params, cfg);
    T fy = traj.final_state().y;
    return {s, fy, fy + one, s >= one, false, std::move(traj)};
  } catch (const BlowUpError& e) {
    T sat = pow10_like(s, 6) * make_like(s, e.y_direction);
    Trajectory<T> stub{{{make_like(s, 0), p0}}, params, std::nullopt, {}};
    return {s, sat, sat, s >= one, true, std::move(stub)};
  }
}

namespace detail {

template <class T>
IntegratorConfig<T> probe_config(IntegratorConfig<T> cfg) {
  cfg.record = false;
  cfg.dense_output = false;
  return cfg;
}

// Coarse fallback scan used near and above the pitchfork, where the
// asymptotic seeds stop isolating roots. Returns all polished roots in
// increasing slope order.
template <class T>
std::vector<T> scan_roots(const Params<T>& params, const IntegratorConfig<T>& cfg) {
  using std::min;
  IntegratorConfig<T> probe = probe_config(cfg);
  auto resid = [&](const T& s) { return target(s, params, probe).residual; };
  T lo = min(slope_b0(params), make_like(params.epsilon, -2)) - make_like(params.epsilon, 2);
  T hi = make_like(params.epsilon, 1) - pow10_like(params.epsilon, -6);
  auto intervals = sign_change_intervals(resid, lo, hi, 301);
  std::vector<T> roots;
  T xtol_rel = pow10_like(params.epsilon, -12);
  for (auto& [a, b] : intervals)
    roots.push_back(brent<T>(resid, a, b, xtol_rel, xtol_rel));
  return roots;
}

}  // namespace detail

// Solves for one branch: bracket seeded from the asymptotic slope formulas,
// polished by Brent; falls back to a coarse scan when the seeds fail (near
// or above the pitchfork the three roots merge into one, which is returned
// flagged `merged` for any requested tag). Throws BracketError when the
// requested branch does not exist and no merged root is found.
template <class T>
BranchSolution<T> find_branch(Branch branch, const Params<T>& params,
                              const IntegratorConfig<T>& cfg) {
  using std::max;
  const T one = make_like(params.epsilon, 1);
  const T zero = make_like(params.epsilon, 0);
  IntegratorConfig<T> probe = detail::probe_config(cfg);
  const T xtol_rel = pow10_like(params.epsilon, -13);

  T root = zero;
  bool found = false, merged = false;
  // near and above the pitchfork the asymptotic seeds stop isolating roots;
  // classify by explicit root count instead
  if (params.epsilon >= make_like(params.epsilon, 0.15)) {
    auto roots = detail::scan_roots(params, cfg);
    if (roots.size() == 1) {
      root = roots[0];
      merged = true;
      found = true;
    } else if (roots.size() == 3) {
      root = roots[branch == Branch::B0 ? 0 : branch == Branch::M ? 1 : 2];
      found = true;
    } else {
      throw BracketError("find_branch: requested branch does not exist at this epsilon");
    }
  } else if (branch == Branch::B0) {
    auto resid = [&](const T& s) { return target(s, params, probe).residual; };
    T centre = slope_b0(params);
    T margin = max(5 * params.epsilon, one);
    for (int attempt = 0; attempt < 4 && !found; ++attempt) {
      try {
        root = brent<T>(resid, centre - margin, centre + margin, xtol_rel, xtol_rel);
        found = true;
      } catch (const BracketError&) {
        margin = 2 * margin;
      }
    }
  } else {
    auto resid_u = [&](const T& u) { return target(one - u, params, probe).residual; };
    T u_pred = slope_tst(branch, params);
    T factor = make_like(u_pred, 4);
    for (int attempt = 0; attempt < 3 && !found; ++attempt) {
      try {
        T u = brent<T>(resid_u, u_pred / factor, u_pred * factor, xtol_rel * u_pred, xtol_rel);
        root = one - u;
        found = true;
      } catch (const BracketError&) {
        factor = factor * factor;
      }
    }
  }

  if (!found) {
    auto roots = detail::scan_roots(params, cfg);
    if (roots.size() == 1) {
      root = roots[0];
      merged = true;
    } else if (roots.size() == 3) {
      root = roots[branch == Branch::B0 ? 0 : branch == Branch::M ? 1 : 2];
    } else {
      throw BracketError("find_branch: requested branch does not exist at this epsilon");
    }
  }

  IntegratorConfig<T> final_cfg = cfg;
  final_cfg.record = true;
  ShootResult<T> shot = target(root, params, final_cfg);
  return {branch, root, shot.trajectory.final_state().z, std::move(shot.trajectory),
          params.epsilon, merged};
}

// Uniformly sampled target curve, for plotting; cells evaluated in parallel
// and assembled in input order.
template <class T>
std::vector<std::pair<T, T>> scan_target(const Params<T>& params, const T& s_min, const T& s_max,
                                         int n, const IntegratorConfig<T>& cfg) {
  if (n < 2) throw std::invalid_argument("scan_target: need at least 2 samples");
  IntegratorConfig<T> probe = detail::probe_config(cfg);
  std::vector<std::pair<T, T>> out(static_cast<size_t>(n));
  parallel_for(n, [&](long i) {
    T s = s_min + (s_max - s_min) * make_like(s_min, i) / make_like(s_min, n - 1);
    out[static_cast<size_t>(i)] = {s, target(s, params, probe).residual};
  });
  return out;
}

template <class T>
struct CompositeErrorProfile {
  T max_abs_error;
  std::vector<std::pair<T, T>> profile;  // (x, |composite - numeric|)
};

// Max-norm error of the order-0/1 composite against a converged numerical
// solution, over a uniform grid of at least 1000 points evaluated on the
// dense interpolant.
template <class T>
CompositeErrorProfile<T> composite_error(Branch branch, int order, const Params<T>& params,
                                         const IntegratorConfig<T>& cfg, int n_grid = 1001) {
  using std::abs;
  using std::max;
  if (n_grid < 1000) n_grid = 1000;
  IntegratorConfig<T> dense_cfg = cfg;
  dense_cfg.dense_output = true;
  BranchSolution<T> sol = find_branch(branch, params, dense_cfg);
  CompositeSolution<T> comp = make_composite(branch, order, params);
  CompositeErrorProfile<T> out{make_like(params.epsilon, 0), {}};
  out.profile.reserve(static_cast<size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) {
    T x = make_like(params.epsilon, i) / make_like(params.epsilon, n_grid - 1);
    T y_num = sol.trajectory.at(x).y;
    T err = abs(composite_eval(comp, x).first - y_num);
    out.max_abs_error = max(out.max_abs_error, err);
    out.profile.emplace_back(x, err);
  }
  return out;
}

}  // namespace nlbvp
