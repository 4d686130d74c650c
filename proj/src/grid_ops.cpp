#include "axiflow/grid_ops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace axiflow {

namespace {

inline int reflect(int k, int n) {
  if (k < 0) return -k;
  if (k > n) return 2 * n - k;
  return k;
}

void require_size(const Grid& grid, std::span<const double> f, const char* what) {
  if (static_cast<int>(f.size()) != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": field length " + std::to_string(f.size()) +
                                " does not match grid size " + std::to_string(grid.size()));
  }
}

void require_pinned(std::span<const double> h, const char* what) {
  if (h.front() != 0.0 || h.back() != 0.0) {
    throw std::invalid_argument(std::string(what) + ": field must vanish at theta = 0 and theta = pi");
  }
}

}  // namespace

Grid::Grid(int n) : n_(n), dtheta_(std::numbers::pi / n) {
  if (n < 16 || n % 2 != 0) {
    throw std::invalid_argument("grid size must be an even integer >= 16, got " + std::to_string(n));
  }
  const int m = n + 1;
  theta_.resize(m);
  sin_.resize(m);
  cos_.resize(m);
  w_left_.resize(m);
  w_right_.resize(m);
  const int half = n / 2;
  for (int j = 0; j <= n; ++j) theta_[j] = j * dtheta_;
  theta_[n] = std::numbers::pi;
  // Tables are filled on [0, pi/2] and mirrored so that symmetric data
  // produce mirror-symmetric results to the last bit.
  for (int j = 0; j <= half; ++j) {
    const double t = j * dtheta_;
    const double sh = std::sin(0.5 * t);
    sin_[j] = std::sin(t);
    cos_[j] = std::cos(t);
    w_left_[j] = 2.0 * sh * sh;
    sin_[n - j] = sin_[j];
    cos_[n - j] = -cos_[j];
    w_right_[n - j] = w_left_[j];
  }
  sin_[0] = sin_[n] = 0.0;
  cos_[half] = 0.0;
  for (int j = half + 1; j <= n; ++j) {
    const double s = std::sin(0.5 * (std::numbers::pi - theta_[j]));
    w_left_[j] = 2.0 - 2.0 * s * s;
  }
  for (int j = 0; j < half; ++j) w_right_[j] = 2.0 - w_left_[j];

  // Scaled least-squares design on nodes 1..4: columns t, t^1.5, t^2 with
  // t = w / w_4, then rescale the coefficients back to w.
  const double w4 = w_left_[kFitNodes];
  Eigen::Matrix<double, kFitNodes, 3> design;
  for (int k = 0; k < kFitNodes; ++k) {
    const double t = w_left_[k + 1] / w4;
    design(k, 0) = t;
    design(k, 1) = t * std::sqrt(t);
    design(k, 2) = t * t;
  }
  const Eigen::Matrix<double, 3, kFitNodes> pinv =
      design.colPivHouseholderQr().solve(Eigen::Matrix<double, kFitNodes, kFitNodes>::Identity());
  const double scale[3] = {w4, w4 * std::sqrt(w4), w4 * w4};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < kFitNodes; ++k) fit_weights_[r][k] = pinv(r, k) / scale[r];
}

std::shared_ptr<const Grid> Grid::shared(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const Grid>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto grid = std::make_shared<const Grid>(n);
  cache.emplace(n, grid);
  return grid;
}

double EndpointModel::value(double w) const { return w * (alpha + beta * std::sqrt(w) + gamma * w); }

double EndpointModel::dw(double w) const { return alpha + 1.5 * beta * std::sqrt(w) + 2.0 * gamma * w; }

EndpointFit fit_endpoints(const Grid& grid, std::span<const double> h) {
  require_size(grid, h, "fit_endpoints");
  const int n = grid.n();
  const auto& wts = grid.fit_weights();
  EndpointFit fit;
  double left[3] = {0.0, 0.0, 0.0};
  double right[3] = {0.0, 0.0, 0.0};
  for (int r = 0; r < 3; ++r) {
    for (int k = 0; k < Grid::kFitNodes; ++k) {
      left[r] += wts[r][k] * h[k + 1];
      right[r] += wts[r][k] * h[n - 1 - k];
    }
  }
  fit.left = {left[0], left[1], left[2]};
  fit.right = {right[0], right[1], right[2]};
  return fit;
}

Field diff1(const Grid& grid, std::span<const double> f) {
  require_size(grid, f, "diff1");
  const int n = grid.n();
  const double scale = 1.0 / (12.0 * grid.dtheta());
  Field out(f.size());
  for (int j = 0; j <= n; ++j) {
    const double near = f[reflect(j + 1, n)] - f[reflect(j - 1, n)];
    const double far = f[reflect(j + 2, n)] - f[reflect(j - 2, n)];
    out[j] = (8.0 * near - far) * scale;
  }
  return out;
}

Field diff2(const Grid& grid, std::span<const double> f) {
  require_size(grid, f, "diff2");
  const int n = grid.n();
  const double scale = 1.0 / (12.0 * grid.dtheta() * grid.dtheta());
  Field out(f.size());
  for (int j = 0; j <= n; ++j) {
    const double near = f[reflect(j + 1, n)] + f[reflect(j - 1, n)];
    const double far = f[reflect(j + 2, n)] + f[reflect(j - 2, n)];
    out[j] = (16.0 * near - far - 30.0 * f[j]) * scale;
  }
  return out;
}

Field quot_sin2(const Grid& grid, std::span<const double> h, const EndpointFit& fit) {
  require_size(grid, h, "quot_sin2");
  require_pinned(h, "quot_sin2");
  const int n = grid.n();
  const auto s = grid.sin();
  const auto wl = grid.w_left();
  const auto wr = grid.w_right();
  Field out(h.size());
  for (int j = 1; j < n; ++j) out[j] = h[j] / (s[j] * s[j]);
  // sin^2 = w (2 - w) on either side.
  for (int j = 1; j <= Grid::kTaylorNodes; ++j) {
    const double w = wl[j];
    out[j] = fit.left.value(w) / (w * (2.0 - w));
    const double v = wr[n - j];
    out[n - j] = fit.right.value(v) / (v * (2.0 - v));
  }
  out[0] = 0.5 * fit.h2_0();
  out[n] = 0.5 * fit.h2_pi();
  return out;
}

Field quot_dsin(const Grid& grid, std::span<const double> h, std::span<const double> dh,
                const EndpointFit& fit) {
  require_size(grid, h, "quot_dsin");
  require_size(grid, dh, "quot_dsin");
  require_pinned(h, "quot_dsin");
  const int n = grid.n();
  const auto s = grid.sin();
  Field out(h.size());
  for (int j = 1; j < n; ++j) out[j] = dh[j] / s[j];
  // dw/dtheta = +sin on the left, -sin on the right.
  for (int j = 1; j <= Grid::kTaylorNodes; ++j) {
    out[j] = fit.left.dw(grid.w_left()[j]);
    out[n - j] = -fit.right.dw(grid.w_right()[n - j]);
  }
  out[0] = fit.h2_0();
  out[n] = -fit.h2_pi();
  return out;
}

Field quot_dtan(const Grid& grid, std::span<const double> h, std::span<const double> dh,
                const EndpointFit& fit) {
  require_size(grid, h, "quot_dtan");
  require_size(grid, dh, "quot_dtan");
  require_pinned(h, "quot_dtan");
  const int n = grid.n();
  const auto s = grid.sin();
  const auto c = grid.cos();
  Field out(h.size());
  for (int j = 1; j < n; ++j) out[j] = dh[j] * c[j] / s[j];
  for (int j = 1; j <= Grid::kTaylorNodes; ++j) {
    out[j] = fit.left.dw(grid.w_left()[j]) * c[j];
    out[n - j] = -fit.right.dw(grid.w_right()[n - j]) * c[n - j];
  }
  out[0] = fit.h2_0();
  out[n] = fit.h2_pi();
  return out;
}

Field quot_dtan_unpinned(const Grid& grid, std::span<const double> f) {
  require_size(grid, f, "quot_dtan_unpinned");
  const int n = grid.n();
  const auto s = grid.sin();
  const auto c = grid.cos();
  const Field d1 = diff1(grid, f);
  const Field d2 = diff2(grid, f);
  Field out(f.size());
  for (int j = 1; j < n; ++j) out[j] = d1[j] * c[j] / s[j];
  out[0] = d2[0];
  out[n] = d2[n];
  return out;
}

Field mul_sin(const Grid& grid, std::span<const double> f) {
  require_size(grid, f, "mul_sin");
  const auto s = grid.sin();
  Field out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = f[j] * s[j];
  return out;
}

double simpson(const Grid& grid, std::span<const double> f) {
  require_size(grid, f, "simpson");
  const int n = grid.n();
  double odd = 0.0;
  double even = 0.0;
  for (int j = 1; j < n; j += 2) odd += f[j];
  for (int j = 2; j < n; j += 2) even += f[j];
  return grid.dtheta() / 3.0 * (f[0] + f[n] + 4.0 * odd + 2.0 * even);
}

}  // namespace axiflow
