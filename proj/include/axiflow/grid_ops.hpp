#pragma once

// Even-periodic finite differences on theta in [0, pi] and the singular
// quotients h/sin^2, h'/sin, h'/tan evaluated with their endpoint limits.
//
// Grid functions are sampled at theta_j = j*pi/N, j = 0..N. Stencils that
// reach past either end use the even reflections f(-s) = f(s) and
// f(pi + s) = f(pi - s).

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace axiflow {

using Field = std::vector<double>;

class Grid {
 public:
  explicit Grid(int n);

  /// Shared immutable grid for resolution n; tables are built once per n.
  static std::shared_ptr<const Grid> shared(int n);

  int n() const { return n_; }
  int size() const { return n_ + 1; }
  double dtheta() const { return dtheta_; }

  std::span<const double> theta() const { return theta_; }
  std::span<const double> sin() const { return sin_; }
  std::span<const double> cos() const { return cos_; }
  // 1 - cos(theta) and 1 + cos(theta), computed without cancellation.
  std::span<const double> w_left() const { return w_left_; }
  std::span<const double> w_right() const { return w_right_; }

  /// Least-squares weights mapping h at the first fit nodes to the
  /// coefficients (alpha, beta, gamma) of alpha*w + beta*w^1.5 + gamma*w^2.
  const std::array<std::array<double, 4>, 3>& fit_weights() const { return fit_weights_; }

  static constexpr int kFitNodes = 4;
  static constexpr int kTaylorNodes = 2;

 private:
  int n_;
  double dtheta_;
  std::vector<double> theta_, sin_, cos_, w_left_, w_right_;
  std::array<std::array<double, 4>, 3> fit_weights_{};
};

/// Local model h ~ alpha*w + beta*w^1.5 + gamma*w^2 near one pole, where
/// w = 1 -+ cos(theta). alpha is the second theta-derivative at the pole.
struct EndpointModel {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double value(double w) const;
  double dw(double w) const;  // dh/dw
};

struct EndpointFit {
  EndpointModel left;
  EndpointModel right;

  double h2_0() const { return left.alpha; }
  double h2_pi() const { return right.alpha; }
};

/// Fits both pole models. Only h at nodes 1..4 and N-1..N-4 is read; the
/// pole values are taken to be zero.
EndpointFit fit_endpoints(const Grid& grid, std::span<const double> h);

Field diff1(const Grid& grid, std::span<const double> f);
Field diff2(const Grid& grid, std::span<const double> f);

/// h / sin^2 for endpoint-pinned h. Throws std::invalid_argument when
/// h(0) or h(pi) is nonzero.
Field quot_sin2(const Grid& grid, std::span<const double> h, const EndpointFit& fit);

/// h' / sin for endpoint-pinned h; dh is diff1(h).
Field quot_dsin(const Grid& grid, std::span<const double> h, std::span<const double> dh,
                const EndpointFit& fit);

/// h' / tan for endpoint-pinned h; exactly 0 at theta = pi/2.
Field quot_dtan(const Grid& grid, std::span<const double> h, std::span<const double> dh,
                const EndpointFit& fit);

/// f' / tan for an arbitrary even grid function (no pinning); the pole
/// values are the limits f''(0) and f''(pi) taken from diff2.
Field quot_dtan_unpinned(const Grid& grid, std::span<const double> f);

/// Pointwise f * sin(theta); zero at both poles.
Field mul_sin(const Grid& grid, std::span<const double> f);

/// Composite Simpson rule over [0, pi] (N is even).
double simpson(const Grid& grid, std::span<const double> f);

}  // namespace axiflow
