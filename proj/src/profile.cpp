#include "axiflow/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "axiflow/errors.hpp"

namespace axiflow {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// Weights of the first and second derivative at z of the polynomial
// through nodes xs (Fornberg's recursion).
void derivative_weights(double z, std::span<const double> xs, std::span<double> w1, std::span<double> w2) {
  const int m = static_cast<int>(xs.size());
  std::vector<double> c(static_cast<std::size_t>(m) * 3, 0.0);
  auto at = [&](int j, int k) -> double& { return c[static_cast<std::size_t>(j) * 3 + k]; };
  double c1 = 1.0;
  double c4 = xs[0] - z;
  at(0, 0) = 1.0;
  for (int i = 1; i < m; ++i) {
    const int mn = std::min(i, 2);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) at(i, k) = c1 * (k * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) at(j, k) = (c4 * at(j, k) - k * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  for (int j = 0; j < m; ++j) {
    w1[j] = at(j, 1);
    w2[j] = at(j, 2);
  }
}

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

HProfile::HProfile(std::vector<double> values, double c, double d)
    : values_(std::move(values)), c_(c), d_(d) {
  const int n = static_cast<int>(values_.size()) - 1;
  grid_ = Grid::shared(n);
  if (!(d_ > 0.0) || !std::isfinite(d_) || !std::isfinite(c_)) {
    throw std::invalid_argument("HProfile: half-width d must be finite and positive, got " + fmt(d_));
  }
  if (!all_finite(values_)) throw std::invalid_argument("HProfile: non-finite sample");
}

PhysicalProfile::PhysicalProfile(std::vector<double> xs, std::vector<double> v)
    : xs_(std::move(xs)), v_(std::move(v)) {
  if (xs_.size() != v_.size()) throw std::invalid_argument("PhysicalProfile: xs and v differ in length");
  if (xs_.size() < 4) throw std::invalid_argument("PhysicalProfile: need at least 4 samples");
  if (!all_finite(xs_) || !all_finite(v_)) throw std::invalid_argument("PhysicalProfile: non-finite sample");
  if (!(xs_.front() < xs_.back())) throw std::invalid_argument("PhysicalProfile: requires a < b");
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("PhysicalProfile: xs must be strictly increasing");
  }
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (v_[i] < 0.0) {
      throw std::invalid_argument("PhysicalProfile: negative v = " + fmt(v_[i]) + " at x = " + fmt(xs_[i]));
    }
  }
  u_.resize(v_.size());
  std::transform(v_.begin(), v_.end(), u_.begin(), [](double vi) { return std::sqrt(2.0 * vi); });
}

HProfile h_from_physical(const PhysicalProfile& p, int n) {
  const auto grid = Grid::shared(n);
  const double a = p.a();
  const double b = p.b();
  const double d = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  boost::math::interpolators::pchip<std::vector<double>> interp(
      std::vector<double>(p.xs().begin(), p.xs().end()), std::vector<double>(p.v().begin(), p.v().end()));
  std::vector<double> values(grid->size(), 0.0);
  const auto wl = grid->w_left();
  const auto wr = grid->w_right();
  for (int j = 1; j < n; ++j) {
    // Measure from the nearer end so the nodes next to the axis keep
    // their relative accuracy.
    double x = j <= n / 2 ? a + d * wl[j] : b - d * wr[j];
    x = std::clamp(x, a, b);
    values[j] = interp(x);
  }
  return HProfile(std::move(values), c, d);
}

PhysicalProfile physical_from_h(const HProfile& h) {
  const Grid& grid = h.grid();
  const int n = grid.n();
  std::vector<double> xs(grid.size());
  const auto wl = grid.w_left();
  const auto wr = grid.w_right();
  for (int j = 0; j <= n; ++j) xs[j] = j <= n / 2 ? h.a() + h.d() * wl[j] : h.b() - h.d() * wr[j];
  xs[0] = h.a();
  xs[n] = h.b();
  return PhysicalProfile(std::move(xs), std::vector<double>(h.values().begin(), h.values().end()));
}

CurvatureSample curvature_interior(double u, double u_x, double u_xx) {
  if (!(u > 0.0)) throw std::domain_error("curvature_interior: u must be positive (axis points use curvature_axis)");
  const double g = 1.0 + u_x * u_x;
  CurvatureSample k;
  k.k1 = -u_xx / (g * std::sqrt(g));
  k.k2 = 1.0 / (u * std::sqrt(g));
  k.H = k.k1 + k.k2;
  return k;
}

CurvatureSample curvature_axis(const HProfile& h, Pole end, double h2_tol) {
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  const double h2 = end == Pole::left ? fit.h2_0() : fit.h2_pi();
  if (!(h2 > h2_tol)) {
    throw AxisDegeneracyError("curvature_axis: h'' at the " + std::string(end == Pole::left ? "left" : "right") +
                                  " pole is " + fmt(h2),
                              fit.h2_0(), fit.h2_pi());
  }
  CurvatureSample k;
  k.k1 = h.d() / h2;
  k.k2 = k.k1;
  k.H = k.k1 + k.k2;
  return k;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double extrapolate_to_zero(std::span<const double> s, std::span<const double> f) {
  if (s.size() != f.size() || s.empty()) throw std::invalid_argument("extrapolate_to_zero: need matching non-empty samples");
  double result = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double weight = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k != i) weight *= s[k] / (s[k] - s[i]);
    }
    result += weight * f[i];
  }
  return result;
}

ValidationReport validate_initial(const HProfile& h, const ValidationOptions& opts) {
  const Grid& grid = h.grid();
  const int n = grid.n();
  const auto vals = h.values();
  const double hmax = max_abs(vals);
  ValidationReport report;

  {
    const double worst = std::max(std::abs(vals[0]), std::abs(vals[n]));
    report.checks.push_back({"endpoint_zero", worst <= 1e-14 * hmax, worst,
                             "h(0) = " + fmt(vals[0]) + ", h(pi) = " + fmt(vals[n])});
  }
  {
    double lo = vals[1];
    int at = 1;
    for (int j = 2; j < n; ++j) {
      if (vals[j] < lo) {
        lo = vals[j];
        at = j;
      }
    }
    report.checks.push_back({"interior_positive", lo > 0.0, lo, "min at node " + std::to_string(at)});
  }

  const EndpointFit fit = fit_endpoints(grid, vals);
  const double h2_floor = opts.tolerance * hmax;
  report.checks.push_back({"h2_left_positive", fit.h2_0() > h2_floor, fit.h2_0(), "h''(0) = " + fmt(fit.h2_0())});
  report.checks.push_back({"h2_right_positive", fit.h2_pi() > h2_floor, fit.h2_pi(), "h''(pi) = " + fmt(fit.h2_pi())});

  // Limits toward a pole are extrapolated with a quartic in theta through
  // five nodes. Odd powers are kept because admissible data may carry a
  // theta^3 term. The gap to the cubic through the first four nodes bounds
  // the truncation error, which on coarse grids exceeds the tolerance.
  constexpr int kLimitNodes = 5;
  const double dt = grid.dtheta();
  struct Limit {
    double value;
    double error;
  };
  auto limit = [&](int first, auto&& sample, bool left) {
    double s[kLimitNodes], f[kLimitNodes];
    for (int k = 0; k < kLimitNodes; ++k) {
      const int off = first + k;
      s[k] = off * dt;
      f[k] = sample(left ? off : n - off);
    }
    const double quartic = extrapolate_to_zero(s, f);
    const double cubic = extrapolate_to_zero(std::span(s, kLimitNodes - 1), std::span(f, kLimitNodes - 1));
    return Limit{quartic, std::abs(quartic - cubic)};
  };

  // One-sided slopes at the poles must vanish for the even extension to be
  // differentiable there.
  {
    auto slope_left = [&](int j) { return (vals[j] - vals[0]) / (j * dt); };
    auto slope_right = [&](int j) { return (vals[n] - vals[j]) / ((n - j) * dt); };
    const Limit left = limit(1, slope_left, true);
    const Limit right = limit(1, slope_right, false);
    const double worst = std::max(std::abs(left.value), std::abs(right.value));
    const double allowance = opts.tolerance * std::max(hmax, 1e-300) / std::numbers::pi + std::max(left.error, right.error);
    report.checks.push_back({"even_consistency", worst <= allowance, worst,
                             "one-sided h'(0+) = " + fmt(left.value) + ", h'(pi-) = " + fmt(right.value)});
  }

  // lim (h'' - h'/tan) at both poles, from nodes whose stencils stay on one
  // side of the pole.
  {
    const Field d1 = diff1(grid, vals);
    const Field d2 = diff2(grid, vals);
    const auto s = grid.sin();
    const auto c = grid.cos();
    Field g(grid.size(), 0.0);
    for (int j = 1; j < n; ++j) g[j] = d2[j] - d1[j] * c[j] / s[j];
    const double scale = std::max({max_abs(g), std::abs(fit.h2_0()), std::abs(fit.h2_pi()), 1e-300});
    auto sample = [&](int j) { return g[j]; };
    const Limit left = limit(2, sample, true);
    const Limit right = limit(2, sample, false);
    report.checks.push_back({"pole_condition_left", std::abs(left.value) <= opts.tolerance * scale + left.error,
                             left.value, "extrapolated (h'' - h'/tan)(0+)"});
    report.checks.push_back({"pole_condition_right", std::abs(right.value) <= opts.tolerance * scale + right.error,
                             right.value, "extrapolated (h'' - h'/tan)(pi-)"});
  }
  return report;
}

ValidationReport axis_regularity_check(const PhysicalProfile& p, const ValidationOptions& opts) {
  const auto xs = p.xs();
  const auto v = p.v();
  const int m = static_cast<int>(xs.size()) - 1;
  ValidationReport report;
  if (m < 9) {
    report.checks.push_back({"enough_samples", false, static_cast<double>(m + 1), "need at least 10 samples"});
    return report;
  }
  const double vmax = max_abs(v);

  report.checks.push_back({"endpoint_zero", std::max(v[0], v[m]) <= 1e-14 * vmax, std::max(v[0], v[m]),
                           "v(a) = " + fmt(v[0]) + ", v(b) = " + fmt(v[m])});

  // Admissible profiles expand in powers of sigma = sqrt(distance to the
  // end), so limits are extrapolated in sigma and v'' is taken through
  // derivatives in sigma, where v is smooth.
  constexpr int kNodes = 5;
  auto sigma = [&](int i, bool left) { return std::sqrt(left ? xs[i] - xs[0] : xs[m] - xs[i]); };
  auto index = [&](int k, bool left) { return left ? k : m - k; };

  auto slope_limit = [&](bool left) {
    double s[kNodes], f[kNodes];
    for (int k = 0; k < kNodes; ++k) {
      const int i = index(k + 1, left);
      s[k] = sigma(i, left);
      f[k] = v[i] / (s[k] * s[k]);
    }
    // d/dx = -d/dt at the right end.
    return (left ? 1.0 : -1.0) * extrapolate_to_zero(s, f);
  };
  double slope_scale = 1e-300;
  for (int i = 0; i < m; ++i) slope_scale = std::max(slope_scale, std::abs(v[i + 1] - v[i]) / (xs[i + 1] - xs[i]));
  const double va = slope_limit(true);
  const double vb = slope_limit(false);
  report.checks.push_back({"slope_left_positive", va > opts.tolerance * slope_scale, va, "v'(a) = " + fmt(va)});
  report.checks.push_back({"slope_right_negative", vb < -opts.tolerance * slope_scale, vb, "v'(b) = " + fmt(vb)});

  // Scale: v v'' from the three-point nonuniform second difference.
  double scale = 1e-300;
  for (int i = 1; i < m; ++i) {
    const double hl = xs[i] - xs[i - 1];
    const double hr = xs[i + 1] - xs[i];
    const double vpp = 2.0 * (hl * v[i + 1] - (hl + hr) * v[i] + hr * v[i - 1]) / (hl * hr * (hl + hr));
    scale = std::max(scale, std::abs(v[i] * vpp));
  }

  // With t the distance to the end and V(sigma) = v, v_tt = (V'' - V'/sigma) / (4 sigma^2).
  auto vvpp_limit = [&](bool left) {
    double s[kNodes], f[kNodes];
    double ss[kNodes], vs[kNodes], w1[kNodes], w2[kNodes];
    for (int k = 0; k < kNodes; ++k) {
      const int centre = k + 2;
      for (int q = 0; q < kNodes; ++q) {
        const int i = index(centre - 2 + q, left);
        ss[q] = sigma(i, left);
        vs[q] = v[i];
      }
      derivative_weights(ss[2], ss, w1, w2);
      double d1 = 0.0, d2 = 0.0;
      for (int q = 0; q < kNodes; ++q) {
        d1 += w1[q] * vs[q];
        d2 += w2[q] * vs[q];
      }
      s[k] = ss[2];
      f[k] = vs[2] * (d2 - d1 / ss[2]) / (4.0 * ss[2] * ss[2]);
    }
    return extrapolate_to_zero(s, f);
  };
  const double la = vvpp_limit(true);
  const double lb = vvpp_limit(false);
  report.checks.push_back({"vvpp_left_zero", std::abs(la) <= opts.tolerance * scale, la, "lim (v v'')(a+)"});
  report.checks.push_back({"vvpp_right_zero", std::abs(lb) <= opts.tolerance * scale, lb, "lim (v v'')(b-)"});
  return report;
}

}  // namespace axiflow
