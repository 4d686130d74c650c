#include <doctest.h>

#include <cmath>
#include <numbers>

#include "axiflow/scenarios.hpp"
#include "axiflow/stepper.hpp"
#include "support.hpp"

using namespace axiflow;

namespace {

constexpr double pi = std::numbers::pi;

FlowParams params(int n, double t_max) {
  FlowParams p;
  p.n = n;
  p.t_max = t_max;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  FlowParams p;
  CHECK_NOTHROW(p.validate());
  p.n = 15;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowParams{};
  p.safety = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowParams{};
  p.rtol = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = FlowParams{};
  p.thresholds.d_min = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("one RK4 step on the sphere") {
  const double dt = 1e-4;
  const HProfile next = step_rk4(sphere(128, 1.0), dt);
  CHECK(std::abs(next.d() - std::sqrt(1 - 4 * dt)) < 1e-12);
  CHECK(next.c() == 0.0);
  CHECK(next.values()[0] == 0.0);
  CHECK(next.values()[128] == 0.0);
}

TEST_CASE("a zero step is the identity") {
  const HProfile h = dumbbell(64, 1.0, 0.5);
  const HProfile same = step_rk4(h, 0.0);
  CHECK(std::equal(same.values().begin(), same.values().end(), h.values().begin()));
  CHECK(same.d() == h.d());
  CHECK(same.c() == h.c());
  CHECK_THROWS_AS(step_rk4(h, -1e-3), std::invalid_argument);
}

TEST_CASE("a step that leaves the admissible set is rejected") {
  CHECK_THROWS_AS(step_rk4(sphere(64, 1.0), 0.3), StepRejected);
}

TEST_CASE("step size control") {
  const FlowParams p;
  CHECK(adapt_dt(1.0, 1e-3, p) == doctest::Approx(p.safety * 1e-3));
  CHECK(adapt_dt(1.0 / 32.0, 1e-3, p) == doctest::Approx(2 * p.safety * 1e-3));
  CHECK(adapt_dt(1e-12, 1e-3, p) == doctest::Approx(4e-3));
  CHECK(adapt_dt(1e12, 1e-3, p) == doctest::Approx(0.25e-3));
  CHECK(adapt_dt(0.0, 1e-3, p) == doctest::Approx(4e-3));
}

TEST_CASE("stability clamp scales with d^2") {
  const FlowParams p;
  const double big = stable_dt(sphere(128, 1.0), p);
  const double small = stable_dt(sphere(128, 0.1), p);
  CHECK(small / big == doctest::Approx(0.01).epsilon(1e-8));
  const double dth = pi / 128;
  CHECK(big == doctest::Approx(p.cfl * dth * dth).epsilon(1e-8));
}

TEST_CASE("event detection") {
  const HProfile fresh = sphere(128, 1.0);
  const ResolvedThresholds th = resolve_thresholds(EventThresholds{}, fresh);
  CHECK_FALSE(detect_event(fresh, th).has_value());
  CHECK(th.d_min == doctest::Approx(1e-3));

  const auto ext = detect_event(sphere(128, 5e-4), th);
  REQUIRE(ext.has_value());
  CHECK(ext->kind == EventKind::Extinction);

  const HProfile neck = dumbbell(128, 1.0, 0.99999);
  const auto pinch = detect_event(neck, th);
  REQUIRE(pinch.has_value());
  CHECK(pinch->kind == EventKind::NeckPinch);
  CHECK(*pinch->theta_star == doctest::Approx(pi / 2));

  // Extinction wins over a pinch.
  const auto both = detect_event(dumbbell(128, 5e-4, 0.99999), th);
  REQUIRE(both.has_value());
  CHECK(both->kind == EventKind::Extinction);

  const HProfile flat = support::profile(128, [](double t) {
    const double s = std::sin(t);
    return s * s * (1e-6 + (1 - std::cos(t)) / 2);
  });
  const auto deg = detect_event(flat, th);
  REQUIRE(deg.has_value());
  CHECK(deg->kind == EventKind::AxisDegeneracy);
  CHECK(*deg->theta_star == 0.0);
}

TEST_CASE("sphere area") {
  for (double d : {0.5, 1.0, 2.0}) CHECK(surface_area(sphere(128, d)) == doctest::Approx(4 * pi * d * d).epsilon(1e-7));
}

TEST_CASE("sphere runs follow the exact half-width") {
  double worst = 0.0;
  RunOptions opts;
  opts.observer = [&](const StepScalars& s, const HProfile&) {
    const double exact = std::sqrt(1 - 4 * s.t);
    worst = std::max(worst, std::abs(s.d - exact) / exact);
  };
  const auto [traj, rep] = run(sphere(128, 1.0), params(128, 0.2), opts);
  CHECK(rep.kind == EventKind::MaxTimeReached);
  CHECK(rep.t_event == 0.2);
  CHECK(worst < 1e-6);
  CHECK(traj.rows.back().t == 0.2);
}

TEST_CASE("sphere half-width converges in n") {
  std::vector<int> ns{64, 128, 256};
  std::vector<double> errs;
  for (int n : ns) {
    const auto [traj, rep] = run(sphere(n, 1.0), params(n, 0.2));
    errs.push_back(std::abs(rep.diagnostics.d - std::sqrt(0.2)));
  }
  CHECK(support::observed_order(ns, errs) >= 2.0);
}

TEST_CASE("translated sphere keeps its centre") {
  double worst = 0.0;
  RunOptions opts;
  opts.observer = [&](const StepScalars& s, const HProfile&) { worst = std::max(worst, std::abs(s.c - 5.0)); };
  run(sphere(64, 1.0, 5.0), params(64, 0.2), opts);
  CHECK(worst <= 1e-10);
}

TEST_CASE("mirror symmetry is preserved") {
  double worst = 0.0, drift = 0.0;
  RunOptions opts;
  opts.observer = [&](const StepScalars& s, const HProfile& h) {
    const int n = h.n();
    const double scale = support::max_abs(h.values());
    for (int j = 0; j <= n; ++j) worst = std::max(worst, std::abs(h.values()[j] - h.values()[n - j]) / scale);
    drift = std::max(drift, std::abs(s.c - 1.5));
  };
  run(dumbbell(128, 1.0, 0.5, 1.5), params(128, 0.1), opts);
  CHECK(worst <= 1e-9);
  CHECK(drift <= 1e-9 * 1.5);
}

TEST_CASE("runs shrink monotonically and keep poles pinned") {
  for (const HProfile& h0 : {ellipsoid(64, 1.0, 0.8), dumbbell(64, 1.0, 0.5), remark213(64)}) {
    bool pinned = true, positive = true;
    RunOptions opts;
    opts.observer = [&](const StepScalars&, const HProfile& h) {
      pinned = pinned && h.values()[0] == 0.0 && h.values()[h.n()] == 0.0;
      for (int j = 1; j < h.n(); ++j) positive = positive && h.values()[j] > 0.0;
    };
    const auto [traj, rep] = run(h0, params(64, 1.0), opts);
    CHECK(rep.kind == EventKind::Extinction);
    CHECK(rep.monotonicity_violations == 0);
    CHECK(pinned);
    CHECK(positive);
    for (std::size_t k = 1; k < traj.rows.size(); ++k) {
      CHECK(traj.rows[k].t > traj.rows[k - 1].t);
      CHECK(traj.rows[k].d < traj.rows[k - 1].d);
      CHECK(traj.rows[k].area < traj.rows[k - 1].area + 1e-10 * traj.rows[0].area);
    }
  }
}

TEST_CASE("ellipsoids become round") {
  for (double beta : {0.8, 1.25}) {
    std::vector<std::pair<double, double>> aspect;
    RunOptions opts;
    opts.observer = [&](const StepScalars& s, const HProfile& h) {
      aspect.emplace_back(s.t, std::abs(std::sqrt(2 * h.values()[h.n() / 2]) / s.d - 1));
    };
    const auto [traj, rep] = run(ellipsoid(64, 1.0, beta), params(64, 1.0), opts);
    REQUIRE(rep.kind == EventKind::Extinction);
    double last = INFINITY;
    bool decreasing = true;
    for (const auto& [t, a] : aspect) {
      if (t < 0.8 * rep.t_event) continue;
      decreasing = decreasing && a < last;
      last = a;
    }
    CHECK(decreasing);
    CHECK(aspect.back().second < 0.01);
  }
}

TEST_CASE("state snapshots") {
  RunOptions opts;
  opts.state_stride = 10;
  const auto [traj, rep] = run(sphere(32, 1.0), params(32, 0.05), opts);
  CHECK(traj.states.size() == traj.state_times.size());
  CHECK(traj.states.size() >= 2);
  CHECK(traj.state_times.front() == 0.0);
  CHECK(traj.state_times.back() == rep.t_event);
}

TEST_CASE("step budget exhaustion is a step failure") {
  FlowParams p = params(32, 0.2);
  p.max_steps = 5;
  const auto [traj, rep] = run(sphere(32, 1.0), p);
  CHECK(rep.kind == EventKind::StepFailure);
  CHECK(rep.t_event < 0.2);
}

TEST_CASE("runs are deterministic") {
  const auto [a, ra] = run(dumbbell(64, 1.0, 0.5), params(64, 0.05));
  const auto [b, rb] = run(dumbbell(64, 1.0, 0.5), params(64, 0.05));
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].d == b.rows[k].d);
    CHECK(a.rows[k].area == b.rows[k].area);
  }
}
