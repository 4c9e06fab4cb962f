#pragma once

// Pitchfork machinery: the combined critical condition g(z_c) = 0, the
// critical point (z_c, eps_c), residual grids over the (eps, y'(0)) plane,
// and the cubic normal-form fit.

#include <array>
#include <stdexcept>
#include <vector>

#include "nlbvp/integrate.hpp"
#include "nlbvp/parallel.hpp"
#include "nlbvp/roots.hpp"
#include "nlbvp/shooting.hpp"

namespace nlbvp {

struct FitError : SolverError {
  using SolverError::SolverError;
};

struct CriticalPoint {
  double z_c;        // most negative z on the critical trajectory
  double epsilon_c;  // pitchfork location
};

// First critical condition: 2 eps_c [z_c + log(1 - z_c)] = -1.
inline double eps_from_zc(double z_c) {
  if (z_c >= 0.0) throw std::domain_error("eps_from_zc: requires z_c < 0");
  return -1.0 / (2.0 * slope_function(z_c));
}

// Combined condition, one-dimensional in z_c:
//   g(z_c) = f(z_c) + Integral_{z_c}^{0} dz / ((1-z) sqrt(1 - f(z)/f(z_c)))
// with f(z) = z + log(1-z). The integrand has an inverse-square-root
// singularity at z = z_c; the bracket under the root is evaluated through
// the distance d = z - z_c to avoid cancellation there.
inline double g_crit(double z_c, double quad_tol = 1e-13) {
  if (z_c >= 0.0) throw std::domain_error("g_crit: requires z_c < 0");
  const double f_c = slope_function(z_c);
  auto integrand = [&](double z, double d) {
    // f(z) - f(z_c) = d + log1p(-d / (1 - z_c)), exact in the distance d
    double df = d + std::log1p(-d / (1.0 - z_c));
    double bracket = df / (-f_c);  // equals 1 - f(z)/f(z_c), positive on (z_c, 0)
    return 1.0 / ((1.0 - z) * std::sqrt(bracket));
  };
  return f_c + quad_singular<double>(integrand, z_c, 0.0, SingularEnd::Left, quad_tol);
}

// Locates the root of g in [-20, -0.5], derives eps_c, and cross-validates
// by integrating the critical trajectory (1, 0) over one time unit.
inline CriticalPoint locate_critical() {
  auto g = [](double z) { return g_crit(z); };
  auto intervals = sign_change_intervals(g, -20.0, -0.5, 79);
  if (intervals.empty())
    throw BracketError("locate_critical: no sign change of g in [-20, -0.5]");
  double z_c = brent<double>(g, intervals[0].first, intervals[0].second, 1e-12, 1e-12);
  double eps_c = eps_from_zc(z_c);

  Params<double> params(eps_c);
  auto cfg = IntegratorConfig<double>::defaults_for(1.0);
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.record = false;
  auto traj = integrate_to_time(PhasePoint<double>{1.0, 0.0}, 1.0, params, cfg);
  if (std::abs(traj.final_state().y + 1.0) > 1e-6 || std::abs(traj.final_state().z) > 1e-5)
    throw SolverError("locate_critical: critical trajectory failed the self-consistency run");
  return {z_c, eps_c};
}

struct GridCell {
  double epsilon;
  double slope;
  double residual;  // y(1) + 1, saturated on blow-up
};

// Full residual grid, rows ordered by eps then slope; cells independent and
// evaluated in parallel.
inline std::vector<GridCell> residual_grid(double eps_min, double eps_max, double slope_min,
                                           double slope_max, int n_eps, int n_slope,
                                           const IntegratorConfig<double>& cfg) {
  if (n_eps < 2 || n_slope < 2)
    throw std::invalid_argument("residual_grid: counts must be at least 2");
  IntegratorConfig<double> probe = cfg;
  probe.record = false;
  probe.dense_output = false;
  std::vector<GridCell> cells(static_cast<size_t>(n_eps) * n_slope);
  parallel_for(static_cast<long>(cells.size()), [&](long idx) {
    int ie = static_cast<int>(idx) / n_slope;
    int is = static_cast<int>(idx) % n_slope;
    double eps = eps_min + (eps_max - eps_min) * ie / (n_eps - 1);
    double s = slope_min + (slope_max - slope_min) * is / (n_slope - 1);
    Params<double> params(eps);
    cells[static_cast<size_t>(idx)] = {eps, s, target(s, params, probe).residual};
  });
  return cells;
}

struct PitchforkFit {
  double A;
  double B;
  double epsilon_c_fit;
};

// Least-squares fit of residual ~ A s^3 + B (eps - eps_c) s on a grid window
// around the pitchfork. Fits the basis {s^3, s, (eps - eps0) s} with eps0
// the window centre, then reads eps_c off the root-structure sign change.
inline PitchforkFit fit_pitchfork(const std::vector<GridCell>& window) {
  if (window.size() < 8) throw FitError("fit_pitchfork: window too small");
  double eps_lo = window[0].epsilon, eps_hi = window[0].epsilon;
  for (const auto& c : window) {
    eps_lo = std::min(eps_lo, c.epsilon);
    eps_hi = std::max(eps_hi, c.epsilon);
  }
  if (eps_hi - eps_lo <= 0.0) throw FitError("fit_pitchfork: window has no eps variation");
  const double eps0 = 0.5 * (eps_lo + eps_hi);

  // normal equations for basis {s^3, s, (eps-eps0) s}
  std::array<double, 9> M{};
  std::array<double, 3> rhs{};
  for (const auto& c : window) {
    double b0 = c.slope * c.slope * c.slope;
    double b1 = c.slope;
    double b2 = (c.epsilon - eps0) * c.slope;
    std::array<double, 3> phi{b0, b1, b2};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) M[static_cast<size_t>(3 * i + j)] += phi[i] * phi[j];
      rhs[static_cast<size_t>(i)] += phi[static_cast<size_t>(i)] * c.residual;
    }
  }
  // Gaussian elimination with partial pivoting
  std::array<std::array<double, 4>, 3> a{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = M[static_cast<size_t>(3 * i + j)];
    a[i][3] = rhs[static_cast<size_t>(i)];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    if (std::abs(a[col][col]) < 1e-14) throw FitError("fit_pitchfork: singular normal equations");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double fac = a[r][col] / a[col][col];
      for (int j = col; j < 4; ++j) a[r][j] -= fac * a[col][j];
    }
  }
  double A = a[0][3] / a[0][0];
  double c1 = a[1][3] / a[1][1];
  double B = a[2][3] / a[2][2];
  if (std::abs(B) < 1e-10) throw FitError("fit_pitchfork: degenerate eps coupling");
  return {A, B, eps0 - c1 / B};
}

}  // namespace nlbvp
