#pragma once

// Linearization of the profile equation at a base profile h0:
//
//   dPhi1[h] = A1 (h'' - h'/tan) + A2 h'/sin + A3 h/sin^2 + A4 h
//              + A5 h''(0) + A6 h''(pi)
//
// and its principal part, the model operator A[h] = A1 (h'' + h'/tan), as
// dense matrices on the grid, with spectral and resolvent diagnostics.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "axiflow/flow_rhs.hpp"
#include "axiflow/grid_ops.hpp"
#include "axiflow/profile.hpp"

namespace axiflow {

using Matrix = Eigen::MatrixXd;

struct Coefficients {
  Field a1, a2, a3, a4, a5, a6;
};

/// The six coefficient fields at every node, pole limits included.
Coefficients coefficients(const HProfile& h0, Exec exec = Exec::parallel);

/// Model operator A1 (h'' + h'/tan) acting on all even grid functions.
Matrix assemble_A(const Grid& grid, std::span<const double> a1, Exec exec = Exec::parallel);
Matrix assemble_A(const HProfile& h0, Exec exec = Exec::parallel);

/// Exact Jacobian of the discrete Phi1 with respect to h at h0. Pole rows
/// and columns are zero: both domain and range are pinned fields.
Matrix assemble_frechet(const HProfile& h0, Exec exec = Exec::parallel);

struct LinearizationBundle {
  Coefficients coeffs;
  Matrix frechet;
  Matrix model;
};

LinearizationBundle linearize(const HProfile& h0, Exec exec = Exec::parallel);

/// Interior (N-1) x (N-1) block of an (N+1) x (N+1) grid operator.
Matrix pinned_block(const Matrix& m);

struct ResolventSample {
  std::complex<double> lambda;
  double kappa = 0.0;
};

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // by real part, descending
  double max_real_part = 0.0;
  double kernel_residual = 0.0;  // max-norm of M applied to the constant vector
  std::vector<ResolventSample> resolvent;
  bool converged = true;
  bool kappa_bounded = true;  // kappa varies by at most 10x over the samples
};

struct SpectrumOptions {
  int probes = 64;
  std::uint64_t seed = 20240607;
  bool compute_eigenvalues = true;
};

/// Dense eigensolve plus resolvent probing at the given lambdas (when
/// empty, a default set right of 1 + max real part is used).
///   kappa(lambda) = max over probes of (|lambda| |h| + |h| + |D2 h|) / |f|,
///   h = (lambda - M)^{-1} f, max norms, D2 the 3-point second difference.
SpectrumReport spectrum(const Matrix& m, std::span<const std::complex<double>> lambdas,
                        const SpectrumOptions& opts = {});

std::vector<std::complex<double>> default_lambdas(double max_real_part);

/// Quadrature weights for int_0^pi g sin dtheta that are exact on the
/// range of the discrete model operator (sum to 2, positive).
Field range_weights(const Grid& grid);

/// int_0^pi f sin / a1 with range_weights; vanishes for f = assemble_A(a1) h.
double range_integral(const Grid& grid, std::span<const double> a1, std::span<const double> f);

/// Relative max-norm residual of the least-squares solve model * h = f.
double range_solve_residual(const Matrix& model, std::span<const double> f);

}  // namespace axiflow
