#include <doctest.h>

#include <cmath>

#include "nlbvp/hpreal.hpp"
#include "nlbvp/integrate.hpp"

using namespace nlbvp;

namespace {

IntegratorConfig<double> tight() {
  auto cfg = IntegratorConfig<double>::defaults_for(1.0);
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  return cfg;
}

double drift_c2(const Trajectory<double>& traj) {
  double c0 = conserved(traj.samples.front().p, traj.params).c_squared;
  double worst = 0.0;
  for (const auto& s : traj.samples)
    worst = std::max(worst, std::abs(conserved(s.p, traj.params).c_squared - c0));
  return worst;
}

}  // namespace

TEST_SUITE("integrate") {
  TEST_CASE("config validation") {
    auto cfg = tight();
    cfg.rel_tol = 0.0;
    Params<double> p(0.1);
    CHECK_THROWS_AS(integrate_to_time(PhasePoint<double>{1.0, 0.0}, 1.0, p, cfg),
                    std::domain_error);
    cfg = tight();
    CHECK_THROWS_AS(integrate_to_time(PhasePoint<double>{1.0, 0.0}, -1.0, p, cfg),
                    std::domain_error);
  }

  TEST_CASE("invariant line y = x + a is reproduced exactly to tolerance") {
    Params<double> p(0.3);
    auto traj = integrate_to_time(PhasePoint<double>{1.0, 1.0}, 1.0, p, tight());
    CHECK(traj.final_time() == 1.0);
    CHECK(traj.final_state().y == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(traj.final_state().z == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("critical trajectory lands at (-1, 0) at eps_c") {
    Params<double> p(0.2159869288903);
    auto traj = integrate_to_time(PhasePoint<double>{1.0, 0.0}, 1.0, p, tight());
    CHECK(std::abs(traj.final_state().y + 1.0) <= 1e-6);
    CHECK(std::abs(traj.final_state().z) <= 1e-5);
  }

  TEST_CASE("paper shot: slope -10.6942 at eps = 0.1 lands near y = -1") {
    Params<double> p(0.1);
    auto traj = integrate_to_time(PhasePoint<double>{1.0, -10.6942}, 1.0, p, tight());
    CHECK(std::abs(traj.final_state().y + 1.0) <= 1e-3);
  }

  TEST_CASE("samples are strictly increasing in t and start at 0") {
    Params<double> p(0.1);
    auto traj = integrate_to_time(PhasePoint<double>{1.0, -2.0}, 1.0, p, tight());
    CHECK(traj.samples.front().t == 0.0);
    for (size_t i = 1; i < traj.samples.size(); ++i)
      CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    CHECK(traj.final_time() == 1.0);
  }

  TEST_CASE("conserved drift stays within 100x the weighted tolerance") {
    // the controller is relative, so the committed error per step scales with
    // the state magnitude; the drift bound carries the same weight
    Params<double> p(0.1);
    auto traj = integrate_to_time(PhasePoint<double>{1.0, -10.6942}, 1.0, p, tight());
    double zmax = 0.0;
    for (const auto& s : traj.samples) zmax = std::max(zmax, std::abs(s.p.z));
    CHECK(drift_c2(traj) <= 100.0 * 1e-12 * std::max(1.0, zmax));
  }

  TEST_CASE("halving rel_tol reduces the final-state error at the 2x rate") {
    // adaptive controllers are noisy per halving, so the 2x-per-halving rate
    // is asserted on a least-squares trend across 20+ halvings and 3 shots
    Params<double> p(0.1);
    auto ref_cfg = tight();
    ref_cfg.rel_tol = 1e-13;
    ref_cfg.abs_tol = 1e-16;
    double mean_factor = 0.0;
    const double slopes[] = {-5.0, -8.0, -2.5};
    for (double s0 : slopes) {
      PhasePoint<double> p0{1.0, s0};
      double y_ref = integrate_to_time(p0, 1.0, p, ref_cfg).final_state().y;
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (double rt = 1e-4; rt >= 1e-11; rt /= 2.0) {
        auto cfg = tight();
        cfg.rel_tol = rt;
        cfg.abs_tol = 1e-16;
        double err = std::abs(integrate_to_time(p0, 1.0, p, cfg).final_state().y - y_ref);
        if (err <= 0.0) continue;
        double lx = std::log2(rt), ly = std::log2(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
      }
      double q = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      mean_factor += std::pow(2.0, q) / 3.0;
    }
    CHECK(mean_factor >= 1.95);
  }

  TEST_CASE("forward then backward returns to the start") {
    Params<double> p(0.15);
    PhasePoint<double> p0{1.0, -3.0};
    auto cfg = tight();
    auto fwd = integrate_to_time(p0, 1.0, p, cfg);
    PhasePoint<double> end = fwd.final_state();
    // reversed field: integrate dw/dt = -f(w)
    auto reversed = [&](const double& /*t*/, const PhasePoint<double>& q) {
      auto v = rhs(q, p);
      return PhasePoint<double>{-v.y, -v.z};
    };
    auto back = integrate_driver(reversed, end, p, cfg, std::optional<double>(1.0), std::nullopt);
    CHECK(std::abs(back.final_state().y - p0.y) <= 100.0 * cfg.rel_tol);
    CHECK(std::abs(back.final_state().z - p0.z) <= 100.0 * cfg.rel_tol * 10.0);
  }

  TEST_CASE("event integration stops on the crossing and satisfies Eq. f(z0)=f(z1)") {
    Params<double> p(0.1);
    auto cfg = tight();
    cfg.dense_output = true;
    auto traj = integrate_to_event(PhasePoint<double>{1.0, -10.694246870497405}, -1.0, p, cfg);
    REQUIRE(traj.terminal_event.has_value());
    CHECK(std::abs(traj.final_state().y + 1.0) <= 1e-9);
    double f0 = slope_function(traj.initial_state().z);
    double f1 = slope_function(traj.final_state().z);
    CHECK(std::abs(f0 - f1) <= 1e-9);
  }

  TEST_CASE("event that never happens raises NoCrossingError") {
    Params<double> p(0.2);
    auto cfg = tight();
    cfg.max_steps = 20000;
    CHECK_THROWS_AS(integrate_to_event(PhasePoint<double>{1.0, 1.0}, -1.0, p, cfg),
                    NoCrossingError);  // rides the invariant line to the right
  }

  TEST_CASE("step budget exhaustion raises NonConvergenceError") {
    Params<double> p(1e-4);
    auto cfg = tight();
    cfg.max_steps = 20;
    CHECK_THROWS_AS(integrate_to_time(PhasePoint<double>{1.0, -3.0}, 1.0, p, cfg),
                    NonConvergenceError);
  }

  TEST_CASE("dense output evaluates mid-step to interpolation accuracy") {
    Params<double> p(0.1);
    auto cfg = tight();
    cfg.dense_output = true;
    auto traj = integrate_to_time(PhasePoint<double>{1.0, -10.6942}, 1.0, p, cfg);
    auto probe = integrate_to_time(PhasePoint<double>{1.0, -10.6942}, 0.377, p, tight());
    auto mid = traj.at(0.377);
    CHECK(mid.y == doctest::Approx(probe.final_state().y).epsilon(1e-8));
    CHECK(mid.z == doctest::Approx(probe.final_state().z).epsilon(1e-7));
  }

  TEST_CASE("forced checkpoints are landed exactly") {
    Params<double> p(0.1);
    std::vector<double> grid{0.125, 0.25, 0.5, 0.75};
    auto cfg = tight();
    cfg.record = false;
    auto traj = integrate_to_time(PhasePoint<double>{1.0, -2.0}, 1.0, p, cfg, grid);
    REQUIRE(traj.samples.size() == 6);  // initial + 4 checkpoints + final
    CHECK(traj.samples[1].t == 0.125);
    CHECK(traj.samples[2].t == 0.25);
    CHECK(traj.samples[3].t == 0.5);
    CHECK(traj.samples[4].t == 0.75);
    CHECK(traj.samples[5].t == 1.0);
  }

  TEST_CASE("bulirsch-stoer engine reproduces dopri5 in double precision") {
    Params<double> p(0.12);
    auto cfg_bs = tight();
    cfg_bs.engine = Engine::BulirschStoer;
    auto a = integrate_to_time(PhasePoint<double>{1.0, -4.0}, 1.0, p, cfg_bs);
    auto b = integrate_to_time(PhasePoint<double>{1.0, -4.0}, 1.0, p, tight());
    CHECK(a.final_state().y == doctest::Approx(b.final_state().y).epsilon(1e-10));
    CHECK(a.final_state().z == doctest::Approx(b.final_state().z).epsilon(1e-9));
  }

  TEST_CASE("bulirsch-stoer reaches 1e-35 tolerances in extended precision") {
    // y' = y from (1) over [0,1] must give e to ~35 digits
    Params<HPReal> p(HPReal::with_digits(1, 50));
    auto cfg = IntegratorConfig<HPReal>::defaults_for(p.epsilon);
    cfg.rel_tol = HPReal("1e-35", 50);
    cfg.abs_tol = HPReal("1e-40", 50);
    cfg.record = false;
    auto expsys = [&](const HPReal& /*t*/, const PhasePoint<HPReal>& q) {
      return PhasePoint<HPReal>{q.y, q.z};
    };
    auto traj = integrate_driver(expsys, PhasePoint<HPReal>{HPReal::with_digits(1, 50), HPReal::with_digits(1, 50)},
                                 p, cfg, std::optional<HPReal>(HPReal::with_digits(1, 50)),
                                 std::nullopt);
    HPReal e = exp(HPReal::with_digits(1, 50));
    CHECK(abs(traj.final_state().y - e) <= e * HPReal("1e-33", 50));
  }

  TEST_CASE("tanh-sinh quadrature anchors") {
    // inverse-square-root singularity at the left endpoint
    auto f1 = [](double /*x*/, double d) { return 0.5 / std::sqrt(d); };
    double I1 = quad_singular<double>(f1, 0.0, 1.0, SingularEnd::Left, 1e-13);
    CHECK(I1 == doctest::Approx(1.0).epsilon(1e-12));
    auto f2 = [](double x, double /*d*/) { return x; };
    double I2 = quad_singular<double>(f2, 0.0, 1.0, SingularEnd::None, 1e-13);
    CHECK(I2 == doctest::Approx(0.5).epsilon(1e-13));
    auto f3 = [](double x, double /*d*/) { return std::exp(x); };
    double I3 = quad_singular<double>(f3, -2.0, 3.0, SingularEnd::None, 1e-12);
    CHECK(I3 == doctest::Approx(std::exp(3.0) - std::exp(-2.0)).epsilon(1e-12));
    auto f4 = [](double /*x*/, double d) { return 1.0 / std::sqrt(d); };  // right end
    double I4 = quad_singular<double>(f4, 0.0, 4.0, SingularEnd::Right, 1e-13);
    CHECK(I4 == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("quadrature failure is signalled") {
    auto bad = [](double x, double /*d*/) { return std::sin(1e8 * x) * 1e8; };
    CHECK_THROWS_AS(quad_singular<double>(bad, 0.0, 1.0, SingularEnd::None, 1e-14),
                    QuadratureError);
  }
}
