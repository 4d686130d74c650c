#pragma once

// Surface representations for a closed surface of revolution about the
// x-axis:
//   u(x)      radius of the generating curve on [a, b]
//   v = u^2/2 square profile, C^1 up to the axis points
//   h(theta)  v transplanted onto [0, pi] through x = c - d cos(theta),
//             c = (a + b)/2, d = (b - a)/2.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axiflow/grid_ops.hpp"

namespace axiflow {

class HProfile {
 public:
  /// values has n + 1 entries (n even, >= 16); d must be positive. Membership
  /// in the admissible set is not enforced here, see validate_initial.
  HProfile(std::vector<double> values, double c, double d);

  int n() const { return grid_->n(); }
  const Grid& grid() const { return *grid_; }
  std::span<const double> values() const { return values_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double a() const { return c_ - d_; }
  double b() const { return c_ + d_; }

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
  double c_;
  double d_;
};

class PhysicalProfile {
 public:
  /// xs strictly increasing with at least 4 samples, v >= 0. u = sqrt(2 v).
  PhysicalProfile(std::vector<double> xs, std::vector<double> v);

  double a() const { return xs_.front(); }
  double b() const { return xs_.back(); }
  std::span<const double> xs() const { return xs_; }
  std::span<const double> v() const { return v_; }
  std::span<const double> u() const { return u_; }

 private:
  std::vector<double> xs_;
  std::vector<double> v_;
  std::vector<double> u_;
};

struct CurvatureSample {
  double k1 = 0.0;
  double k2 = 0.0;
  double H = 0.0;
  std::optional<double> V;
};

enum class Pole { left, right };

/// Resamples v onto the transplanted nodes by monotone cubic interpolation.
HProfile h_from_physical(const PhysicalProfile& p, int n);
PhysicalProfile physical_from_h(const HProfile& h);

CurvatureSample curvature_interior(double u, double u_x, double u_xx);
/// Principal curvatures at an axis point, k1 = k2 = d / h''(pole).
CurvatureSample curvature_axis(const HProfile& h, Pole end, double h2_tol = 0.0);

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const;
  const Check* find(std::string_view name) const;
};

struct ValidationOptions {
  double tolerance = 1e-4;  // relative to the field's max magnitude
};

/// Pointwise membership predicates for the admissible set plus the induced
/// pole condition lim (h'' - h'/tan) = 0.
ValidationReport validate_initial(const HProfile& h, const ValidationOptions& opts = {});

/// Axis regularity of v at both ends: sign of the one-sided slope and the
/// extrapolated limit of v v''.
ValidationReport axis_regularity_check(const PhysicalProfile& p, const ValidationOptions& opts = {});

/// Value at 0 of the polynomial through (s[i], f[i]).
double extrapolate_to_zero(std::span<const double> s, std::span<const double> f);

}  // namespace axiflow
