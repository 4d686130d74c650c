#include <limits>

#include "axiflow/kernels.hpp"
#include "pointwise.hpp"

namespace axiflow::kernels {

namespace serial {

Phi1Result phi1(const PointwiseInputs& in, std::span<double> out) {
  const int n = static_cast<int>(in.h.size()) - 1;
  Phi1Result res{std::numeric_limits<double>::infinity(), -1};
  for (int j = 1; j < n; ++j) {
    const detail::Point p = detail::point(in, j);
    const double D = detail::denominator(in, p);
    if (D < res.min_denominator) {
      res.min_denominator = D;
      res.argmin = j;
    }
    out[j] = detail::phi1_at(in, p, D);
  }
  out[0] = 0.0;
  out[n] = 0.0;
  return res;
}

void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out) {
  const int m = static_cast<int>(in.h.size());
  for (int j = 0; j < m; ++j) {
    double a[6];
    detail::coefficients_at(in, detail::point(in, j), a);
    out.a1[j] = a[0];
    out.a2[j] = a[1];
    out.a3[j] = a[2];
    out.a4[j] = a[3];
    out.a5[j] = a[4];
    out.a6[j] = a[5];
  }
}

void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n) {
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& t : terms) acc += t.scale[i] * t.op[static_cast<std::size_t>(k) * n + i];
      out[static_cast<std::size_t>(k) * n + i] = acc;
    }
  }
}

}  // namespace serial

Phi1Result phi1(const PointwiseInputs& in, std::span<double> out, Exec exec) {
  if (exec == Exec::parallel && static_cast<int>(in.h.size()) >= kParallelThreshold) return omp::phi1(in, out);
  return serial::phi1(in, out);
}

void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out, Exec exec) {
  if (exec == Exec::parallel && static_cast<int>(in.h.size()) >= kParallelThreshold) {
    omp::frechet_coefficients(in, out);
  } else {
    serial::frechet_coefficients(in, out);
  }
}

void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n, Exec exec) {
  // n columns of n rows each: parallel as soon as the matrix is nontrivial.
  if (exec == Exec::parallel && n >= 64) {
    omp::row_scaled_sum(terms, out, n);
  } else {
    serial::row_scaled_sum(terms, out, n);
  }
}

}  // namespace axiflow::kernels
