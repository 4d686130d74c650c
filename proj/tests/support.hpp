#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "axiflow/profile.hpp"

namespace support {

using axiflow::Field;
using axiflow::Grid;
using axiflow::HProfile;

inline Field sample(const Grid& g, const std::function<double(double)>& f) {
  Field out(g.size());
  for (int j = 0; j <= g.n(); ++j) out[j] = f(g.theta()[j]);
  return out;
}

// Pins the poles to zero, as every admissible profile has them.
inline Field pinned(const Grid& g, const std::function<double(double)>& f) {
  Field h = sample(g, f);
  h.front() = 0.0;
  h.back() = 0.0;
  return h;
}

inline HProfile profile(int n, const std::function<double(double)>& f, double d = 1.0, double c = 0.0) {
  return HProfile(pinned(*Grid::shared(n), f), c, d);
}

inline double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

inline double max_diff(std::span<const double> a, std::span<const double> b, int from = 0, int to = -1) {
  if (to < 0) to = static_cast<int>(a.size()) - 1;
  double m = 0.0;
  for (int j = from; j <= to; ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Least-squares slope of log(err) against log(n), sign flipped.
inline double observed_order(const std::vector<int>& ns, const std::vector<double>& errs) {
  const int k = static_cast<int>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < k; ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return -(k * sxy - sx * sy) / (k * sxx - sx * sx);
}

// h = sin^2 (1 + small even perturbation), strictly inside the admissible set.
inline HProfile random_admissible(int n, std::mt19937_64& rng, double d = 1.0) {
  std::uniform_real_distribution<double> u(-0.15, 0.15);
  double a[4];
  for (double& x : a) x = u(rng);
  return profile(
      n,
      [&](double t) {
        const double s = std::sin(t);
        double p = 1.0;
        for (int k = 0; k < 4; ++k) p += a[k] * std::cos((k + 1) * t);
        return 0.5 * d * d * s * s * p;
      },
      d);
}

// Smooth even direction vanishing at both poles.
inline Field random_direction(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double a[6];
  for (double& x : a) x = u(rng);
  Field out = sample(g, [&](double t) {
    double p = 0.0;
    for (int k = 0; k < 6; ++k) p += a[k] * std::cos(k * t);
    return std::sin(t) * std::sin(t) * p;
  });
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

}  // namespace support
