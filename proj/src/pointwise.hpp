#pragma once

// Pointwise expressions shared by the serial and OpenMP kernels.

#include "axiflow/kernels.hpp"

namespace axiflow::kernels::detail {

struct Point {
  double h, s2, ds, r, cos;
};

inline Point point(const PointwiseInputs& in, int j) {
  return {in.h[j], in.s2[j], in.ds[j], in.r[j], in.cos[j]};
}

inline double denominator(const PointwiseInputs& in, const Point& p) {
  return 2.0 * in.d * in.d * p.h + p.ds * p.ds;
}

// Coefficient of h'/sin carried by the moving-frame transport.
inline double transport(const PointwiseInputs& in, const Point& p) {
  return (1.0 + p.cos) * in.inv_h2_0 - (1.0 - p.cos) * in.inv_h2_pi;
}

inline double phi1_at(const PointwiseInputs& in, const Point& p, double D) {
  return (2.0 * p.s2 * p.r - p.ds * p.ds) / D - 1.0 + transport(in, p) * p.ds;
}

inline void coefficients_at(const PointwiseInputs& in, const Point& p, double out[6]) {
  const double D = denominator(in, p);
  const double inv = 1.0 / D;
  const double k = p.ds * p.ds - 2.0 * p.s2 * p.r;
  out[0] = 2.0 * p.s2 * inv;
  out[1] = 2.0 * k * p.ds * inv * inv - 2.0 * p.ds * inv + transport(in, p);
  out[2] = 2.0 * p.r * inv;
  out[3] = 2.0 * in.d * in.d * k * inv * inv;
  out[4] = -p.ds * (1.0 + p.cos) * in.inv_h2_0 * in.inv_h2_0;
  out[5] = p.ds * (1.0 - p.cos) * in.inv_h2_pi * in.inv_h2_pi;
}

}  // namespace axiflow::kernels::detail
