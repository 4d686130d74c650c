#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "axiflow/errors.hpp"
#include "axiflow/profile.hpp"
#include "axiflow/scenarios.hpp"
#include "support.hpp"

using namespace axiflow;
using support::max_diff;
using support::profile;

namespace {

constexpr double pi = std::numbers::pi;

PhysicalProfile uniform_samples(double a, double b, int m, const std::function<double(double)>& v) {
  std::vector<double> xs(m + 1), vs(m + 1);
  for (int i = 0; i <= m; ++i) {
    xs[i] = a + (b - a) * i / m;
    vs[i] = std::max(0.0, v(xs[i]));
  }
  vs.front() = 0.0;
  vs.back() = 0.0;
  return PhysicalProfile(xs, vs);
}

// Samples v at the transplanted nodes of an n-grid on [-1, 1].
PhysicalProfile node_samples(int n, const std::function<double(double)>& v) {
  const auto g = Grid::shared(n);
  std::vector<double> xs(n + 1), vs(n + 1);
  for (int j = 0; j <= n; ++j) {
    xs[j] = j <= n / 2 ? -1.0 + g->w_left()[j] : 1.0 - g->w_right()[j];
    vs[j] = std::max(0.0, v(xs[j]));
  }
  vs.front() = 0.0;
  vs.back() = 0.0;
  return PhysicalProfile(xs, vs);
}

double remark_v(double x) {
  const double w = std::max(0.0, 1.0 - x * x);
  return w + std::pow(w, 1.5);
}

bool only_failure(const ValidationReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.passed == (c.name == name)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("profile construction guards") {
  CHECK_THROWS_AS(HProfile(Field(33, 0.0), 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(HProfile(Field(33, 0.0), 0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(PhysicalProfile({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PhysicalProfile({0.0, 2.0, 1.0, 3.0}, {0.0, 1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PhysicalProfile({1.0, 1.0, 1.0, 1.0}, {0.0, 1.0, 1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PhysicalProfile({0.0, 1.0, 2.0, 3.0}, {0.0, -1.0, 1.0, 0.0}), std::invalid_argument);

  const PhysicalProfile p({0.0, 1.0, 2.0, 3.0}, {0.0, 2.0, 0.5, 0.0});
  for (std::size_t i = 0; i < 4; ++i) CHECK(p.u()[i] * p.u()[i] == doctest::Approx(2.0 * p.v()[i]));
}

TEST_CASE("unit sphere from physical samples") {
  const auto p = uniform_samples(-1.0, 1.0, 2000, [](double x) { return 0.5 * (1 - x * x); });
  const HProfile h = h_from_physical(p, 128);
  CHECK(h.c() == 0.0);
  CHECK(h.d() == 1.0);
  CHECK(h.values()[0] == 0.0);
  CHECK(h.values()[128] == 0.0);
  CHECK(max_diff(h.values(), support::sample(h.grid(), [](double t) { return 0.5 * std::sin(t) * std::sin(t); })) <
        1e-6);
}

TEST_CASE("translated sphere keeps its shape") {
  const auto p = uniform_samples(4.0, 6.0, 2000, [](double x) { return 0.5 * (1 - (x - 5) * (x - 5)); });
  const HProfile h = h_from_physical(p, 128);
  CHECK(h.c() == 5.0);
  CHECK(h.d() == 1.0);
  CHECK(max_diff(h.values(), support::sample(h.grid(), [](double t) { return 0.5 * std::sin(t) * std::sin(t); })) <
        1e-6);
}

TEST_CASE("non-smooth admissible profile from physical samples") {
  const HProfile h = h_from_physical(uniform_samples(-1.0, 1.0, 4000, remark_v), 128);
  const auto exact = support::sample(h.grid(), [](double t) {
    const double s = std::sin(t);
    return s * s + s * s * s;
  });
  CHECK(max_diff(h.values(), exact) < 1e-4);
}

TEST_CASE("physical_from_h") {
  const HProfile h = sphere(64, 1.0);
  const PhysicalProfile p = physical_from_h(h);
  CHECK(p.a() == -1.0);
  CHECK(p.b() == 1.0);
  for (int j = 0; j <= 64; ++j) {
    const double x = p.xs()[j];
    CHECK(x == doctest::Approx(-std::cos(h.grid().theta()[j])).epsilon(1e-14));
    CHECK(p.v()[j] == doctest::Approx(0.5 * (1 - x * x)).epsilon(1e-12));
  }
  const PhysicalProfile q = physical_from_h(sphere(64, 1.0, 5.0));
  CHECK(q.a() == 4.0);
  CHECK(q.b() == 6.0);
}

TEST_CASE("round trip through the transplanted nodes is exact") {
  for (const HProfile& h : {sphere(128, 1.0), remark213(128), dumbbell(128, 1.0, 0.5, 5.0)}) {
    const HProfile back = h_from_physical(physical_from_h(h), h.n());
    CHECK(max_diff(back.values(), h.values()) <= 10 * std::numeric_limits<double>::epsilon() * support::max_abs(h.values()));
    CHECK(back.c() == h.c());
    CHECK(back.d() == h.d());
  }
}

TEST_CASE("resampling converges") {
  // Monotone cubic interpolation is third order where v is monotone and
  // second order at an interior extremum, which sits at theta = pi/2.
  std::vector<int> ns{32, 64, 128, 256};
  std::vector<double> global, monotone;
  for (int n : ns) {
    const HProfile h = h_from_physical(physical_from_h(remark213(n)), 4 * n);
    double eg = 0.0, em = 0.0;
    for (int j = 0; j <= 4 * n; ++j) {
      const double t = h.grid().theta()[j];
      const double s = std::sin(t);
      const double e = std::abs(h.values()[j] - (s * s + s * s * s));
      eg = std::max(eg, e);
      if (t < 1.2 || t > pi - 1.2) em = std::max(em, e);
    }
    global.push_back(eg);
    monotone.push_back(em);
  }
  CHECK(support::observed_order(ns, global) >= 1.9);
  CHECK(support::observed_order(ns, monotone) >= 2.8);
}

TEST_CASE("interior curvature") {
  const CurvatureSample unit = curvature_interior(1.0, 0.0, -1.0);
  CHECK(unit.k1 == doctest::Approx(1.0));
  CHECK(unit.k2 == doctest::Approx(1.0));
  CHECK(unit.H == doctest::Approx(2.0));

  const CurvatureSample cyl = curvature_interior(0.5, 0.0, 0.0);
  CHECK(cyl.k1 == 0.0);
  CHECK(cyl.k2 == doctest::Approx(2.0));

  const CurvatureSample mid = curvature_interior(std::sqrt(3.0) / 2, -1 / std::sqrt(3.0), -8 / (3 * std::sqrt(3.0)));
  CHECK(mid.k1 == doctest::Approx(1.0));
  CHECK(mid.k2 == doctest::Approx(1.0));
  CHECK(mid.H == mid.k1 + mid.k2);

  CHECK_THROWS_AS(curvature_interior(0.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("curvature on sphere families is exact") {
  for (double r : {0.3, 1.0, 2.5}) {
    for (double frac : {-0.9, -0.4, 0.0, 0.3, 0.8}) {
      const double x = frac * r;
      const double u = std::sqrt(r * r - x * x);
      const double ux = -x / u;
      const double uxx = -r * r / (u * u * u);
      const CurvatureSample k = curvature_interior(u, ux, uxx);
      CHECK(std::abs(k.k1 - 1 / r) <= 1e-12);
      CHECK(std::abs(k.k2 - 1 / r) <= 1e-12);
    }
  }
}

TEST_CASE("axis curvature") {
  const CurvatureSample unit = curvature_axis(sphere(128, 1.0), Pole::left);
  CHECK(unit.H == doctest::Approx(2.0).epsilon(1e-12));

  const CurvatureSample r2 = curvature_axis(sphere(128, 2.0), Pole::right);
  CHECK(r2.H == doctest::Approx(1.0).epsilon(1e-12));

  const HProfile ell = profile(128, [](double t) { return 2 * std::sin(t) * std::sin(t); });
  const CurvatureSample e = curvature_axis(ell, Pole::left);
  CHECK(e.H == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.k1 == e.k2);
  CHECK(e.k1 == ell.d() / fit_endpoints(ell.grid(), ell.values()).h2_0());

  const HProfile flat = profile(128, [](double t) { return std::pow(std::sin(t), 4); });
  CHECK_THROWS_AS(curvature_axis(flat, Pole::left, 1e-6), AxisDegeneracyError);
}

TEST_CASE("validate_initial accepts admissible data") {
  const ValidationReport s = validate_initial(sphere(256, 1.0));
  CHECK(s.passed());
  CHECK(std::abs(s.find("pole_condition_left")->value) < 1e-6);

  const ValidationReport r = validate_initial(remark213(256));
  CHECK(r.passed());
  CHECK(r.find("h2_left_positive")->value == doctest::Approx(2.0).epsilon(1e-4));

  CHECK(validate_initial(dumbbell(256, 1.0, 0.95)).passed());
  CHECK(validate_initial(ellipsoid(256, 1.0, 0.8)).passed());
}

TEST_CASE("validate_initial rejects 1 - cos") {
  const auto g = Grid::shared(64);
  const HProfile h(support::sample(*g, [](double t) { return 1 - std::cos(t); }), 0.0, 1.0);
  const ValidationReport r = validate_initial(h);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.find("endpoint_zero")->passed);
}

TEST_CASE("each validation predicate has its own counterexample") {
  const int n = 256;
  {
    const HProfile base = sphere(n, 1.0);
    Field v(base.values().begin(), base.values().end());
    v[n] = 1e-10;
    CHECK(only_failure(validate_initial(HProfile(v, 0.0, 1.0)), "endpoint_zero"));
  }
  CHECK(only_failure(validate_initial(profile(n,
                                              [](double t) {
                                                const double s = std::sin(t), c = std::cos(t);
                                                return s * s * (c * c - 0.25);
                                              })),
                     "interior_positive"));
  CHECK(only_failure(
      validate_initial(profile(n, [](double t) { return std::sin(t) * std::sin(t) * (1 - std::cos(t)) / 2; })),
      "h2_left_positive"));
  CHECK(only_failure(
      validate_initial(profile(n, [](double t) { return std::sin(t) * std::sin(t) * (1 + std::cos(t)) / 2; })),
      "h2_right_positive"));

  // A kink at the poles breaks evenness; the pole limit blows up with it.
  const ValidationReport kink =
      validate_initial(profile(n, [](double t) { return std::sin(t) * std::sin(t) + 0.01 * std::sin(t); }));
  CHECK_FALSE(kink.find("even_consistency")->passed);
  CHECK(kink.find("h2_left_positive")->passed);
  CHECK(kink.find("interior_positive")->passed);

  // theta^2 log theta at one pole: h''(0) is infinite but h'' - h'/tan
  // tends to a nonzero constant.
  auto log_pole = [](bool left) {
    return [left](double t) {
      const double s = std::sin(t);
      const double w = (1 + (left ? -1 : 1) * std::cos(t)) / 2;
      return w > 0 ? s * s * (1 - 0.05 * std::log(w)) : 0.0;
    };
  };
  const ValidationReport pl = validate_initial(profile(n, log_pole(true)));
  CHECK_FALSE(pl.find("pole_condition_left")->passed);
  CHECK(pl.find("pole_condition_right")->passed);
  const ValidationReport pr = validate_initial(profile(n, log_pole(false)));
  CHECK_FALSE(pr.find("pole_condition_right")->passed);
  CHECK(pr.find("pole_condition_left")->passed);
}

TEST_CASE("axis regularity on the unit sphere") {
  for (const auto& p : {uniform_samples(-1, 1, 200, [](double x) { return 0.5 * (1 - x * x); }),
                        node_samples(256, [](double x) { return 0.5 * (1 - x * x); })}) {
    const ValidationReport r = axis_regularity_check(p);
    CHECK(r.passed());
    CHECK(r.find("slope_right_negative")->value == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(r.find("slope_left_positive")->value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(r.find("vvpp_right_zero")->value) < 1e-8);
  }
}

TEST_CASE("axis regularity on the non-smooth admissible profile") {
  const ValidationReport r = axis_regularity_check(node_samples(256, remark_v));
  CHECK(r.passed());
  CHECK(r.find("slope_right_negative")->value == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("quartic tangency fails only the slope checks") {
  auto quartic = [](double x) { return 0.5 * (1 - x * x) * (1 - x * x); };
  for (const auto& p : {uniform_samples(-1, 1, 2000, quartic), node_samples(256, quartic)}) {
    const ValidationReport r = axis_regularity_check(p);
    CHECK_FALSE(r.passed());
    CHECK(r.find("endpoint_zero")->passed);
    CHECK_FALSE(r.find("slope_left_positive")->passed);
    CHECK_FALSE(r.find("slope_right_negative")->passed);
    CHECK(r.find("vvpp_left_zero")->passed);
    CHECK(r.find("vvpp_right_zero")->passed);
  }
}

TEST_CASE("a nonzero v v'' limit is detected") {
  // v = w (1 - 0.2 log w), w = 1 - x^2: the slope is infinite and v v''
  // tends to a nonzero constant.
  const auto p = node_samples(256, [](double x) {
    const double w = 1 - x * x;
    return w > 0 ? w * (1 - 0.2 * std::log(w)) : 0.0;
  });
  const ValidationReport r = axis_regularity_check(p);
  CHECK_FALSE(r.find("vvpp_left_zero")->passed);
  CHECK_FALSE(r.find("vvpp_right_zero")->passed);
}

TEST_CASE("axis regularity needs enough samples") {
  const ValidationReport r = axis_regularity_check(uniform_samples(-1, 1, 5, [](double x) { return 1 - x * x; }));
  CHECK_FALSE(r.passed());
  CHECK(r.find("enough_samples") != nullptr);
}

TEST_CASE("extrapolate_to_zero reproduces polynomials") {
  const double s[] = {0.1, 0.2, 0.3, 0.4};
  double f[4];
  for (int i = 0; i < 4; ++i) f[i] = 3 - 2 * s[i] + s[i] * s[i] * s[i];
  CHECK(extrapolate_to_zero(s, f) == doctest::Approx(3.0).epsilon(1e-12));
}
