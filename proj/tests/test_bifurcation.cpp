#include <doctest.h>

#include <chrono>
#include <cmath>

#include "nlbvp/bifurcation.hpp"

using namespace nlbvp;

namespace {

IntegratorConfig<double> grid_cfg() {
  auto cfg = IntegratorConfig<double>::defaults_for(1.0);
  cfg.rel_tol = 1e-10;
  cfg.abs_tol = 1e-12;
  return cfg;
}

int row_sign_changes(const std::vector<GridCell>& cells, double eps) {
  int n = 0;
  const GridCell* prev = nullptr;
  for (const auto& c : cells) {
    if (std::abs(c.epsilon - eps) > 1e-12) continue;
    if (prev && (prev->residual < 0.0) != (c.residual < 0.0)) ++n;
    prev = &c;
  }
  return n;
}

}  // namespace

TEST_SUITE("bifurcation") {
  TEST_CASE("eps_from_zc anchors") {
    CHECK(eps_from_zc(-3.9052637703) == doctest::Approx(0.2159869289).epsilon(1e-9));
    CHECK(eps_from_zc(-1.0) == doctest::Approx(1.6294456766354647).epsilon(1e-12));
    CHECK(eps_from_zc(-1e-4) > 1e3);  // diverges toward the maximum of f
    CHECK_THROWS_AS(eps_from_zc(0.0), std::domain_error);
    CHECK_THROWS_AS(eps_from_zc(0.5), std::domain_error);
  }

  TEST_CASE("g against frozen quadrature references") {
    CHECK(std::abs(g_crit(-3.9052637703)) <= 1e-9);
    CHECK(g_crit(-1.0) == doctest::Approx(0.7471083520781797).epsilon(1e-11));
    CHECK(g_crit(-8.0) == doctest::Approx(-2.6966059764533756).epsilon(1e-11));
    // one sign on a whole neighbourhood of -1
    CHECK(g_crit(-0.9) > 0.0);
    CHECK(g_crit(-1.1) > 0.0);
  }

  TEST_CASE("locate_critical reproduces the published constants quickly") {
    auto t0 = std::chrono::steady_clock::now();
    auto cp = locate_critical();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(std::abs(cp.z_c - (-3.9052637703)) <= 1e-8);
    CHECK(std::abs(cp.epsilon_c - 0.2159869288903) <= 1e-9);
    CHECK(cp.z_c == doctest::Approx(-3.9052637702824905).epsilon(1e-10));
    CHECK(cp.epsilon_c == doctest::Approx(0.21598692889029005).epsilon(1e-11));
    CHECK(secs < 10.0);
  }

  TEST_CASE("residual grid shape, ordering and root structure") {
    CHECK_THROWS_AS(residual_grid(0.2, 0.21, -1.0, 1.0, 1, 5, grid_cfg()),
                    std::invalid_argument);
    const double eps_c = 0.21598692889029005;
    double lo = eps_c - 1e-3, hi = eps_c + 1e-3;
    auto cells = residual_grid(lo, hi, -0.6, 0.6, 2, 121, grid_cfg());
    REQUIRE(cells.size() == 242);
    // rows ordered by eps then slope
    CHECK(cells[0].epsilon == doctest::Approx(lo));
    CHECK(cells[121].epsilon == doctest::Approx(hi));
    for (int i = 1; i < 121; ++i) CHECK(cells[i].slope > cells[i - 1].slope);
    CHECK(row_sign_changes(cells, lo) == 3);
    CHECK(row_sign_changes(cells, hi) == 1);
  }

  TEST_CASE("pitchfork fit finds positive cubic coefficients near eps_c") {
    const double eps_c = 0.21598692889029005;
    auto cells = residual_grid(eps_c - 2e-3, eps_c + 2e-3, -0.4, 0.4, 9, 21, grid_cfg());
    auto fit = fit_pitchfork(cells);
    CHECK(fit.A > 0.0);
    CHECK(fit.B > 0.0);
    CHECK(fit.A == doctest::Approx(0.0528).epsilon(0.05));
    CHECK(fit.B == doctest::Approx(3.318).epsilon(0.02));
    CHECK(std::abs(fit.epsilon_c_fit - eps_c) <= 2e-3);
  }

  TEST_CASE("fit failure on degenerate windows") {
    std::vector<GridCell> flat;
    for (int i = 0; i < 20; ++i) flat.push_back({0.2, -0.5 + i * 0.05, 0.01 * i});
    CHECK_THROWS_AS(fit_pitchfork(flat), FitError);  // no eps variation
    std::vector<GridCell> tiny(flat.begin(), flat.begin() + 4);
    CHECK_THROWS_AS(fit_pitchfork(tiny), FitError);
  }
}
