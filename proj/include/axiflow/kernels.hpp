#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both evaluate the same pointwise expressions so their
// outputs agree bit for bit, whatever the thread count.

#include <span>

namespace axiflow::kernels {

enum class Exec { serial, parallel };

/// Loops shorter than this run serially even under Exec::parallel.
inline constexpr int kParallelThreshold = 2048;

/// Pointwise inputs of the transplanted profile equation on one grid.
struct PointwiseInputs {
  std::span<const double> h;    // h
  std::span<const double> s2;   // h / sin^2
  std::span<const double> ds;   // h' / sin
  std::span<const double> r;    // h'' - h'/tan
  std::span<const double> cos;  // cos(theta)
  double d = 1.0;
  double inv_h2_0 = 0.0;   // 1 / h''(0)
  double inv_h2_pi = 0.0;  // 1 / h''(pi)
};

struct Phi1Result {
  double min_denominator;  // min over interior nodes of 2 d^2 h + (h'/sin)^2
  int argmin;
};

/// Writes the profile-equation right-hand side at interior nodes 1..N-1 and
/// zero at both poles.
Phi1Result phi1(const PointwiseInputs& in, std::span<double> out, Exec exec);

struct CoefficientOutputs {
  std::span<double> a1, a2, a3, a4, a5, a6;
};

/// Frechet-derivative coefficient fields at every node, poles included.
void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out, Exec exec);

/// One term diag(scale) * op of a row-scaled operator sum. op is an n x n
/// column-major matrix.
struct RowScaledTerm {
  std::span<const double> scale;
  std::span<const double> op;
};

/// out = sum_t diag(terms[t].scale) * terms[t].op, column-major n x n.
void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n, Exec exec);

namespace serial {
Phi1Result phi1(const PointwiseInputs& in, std::span<double> out);
void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out);
void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n);
}  // namespace serial

namespace omp {
Phi1Result phi1(const PointwiseInputs& in, std::span<double> out);
void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out);
void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n);
}  // namespace omp

}  // namespace axiflow::kernels
