#pragma once

// Right-hand side of the transplanted system
//   h_t = Phi1(h, d),   c' = Phi2(h, d),   d' = Phi3(h, d)
// for the square profile h(theta) = v(c - d cos theta) of a closed surface
// of revolution moving by mean curvature.

#include "axiflow/grid_ops.hpp"
#include "axiflow/kernels.hpp"
#include "axiflow/profile.hpp"

namespace axiflow {

using kernels::Exec;

/// The derivative and quotient fields Phi1 is built from, with the pole
/// fits they share.
struct QuotientFields {
  EndpointFit fit;
  Field d1;  // h'
  Field d2;  // h''
  Field s2;  // h / sin^2
  Field ds;  // h' / sin
  Field dt;  // h' / tan
  Field r;   // h'' - h'/tan, zero at the poles
};

QuotientFields quotient_fields(const Grid& grid, std::span<const double> h);

struct RhsEval {
  Field h_t;
  double c_dot = 0.0;
  double d_dot = 0.0;
  double h2_0 = 0.0;
  double h2_pi = 0.0;
};

struct RhsOptions {
  /// Endpoint second derivatives at or below this are an axis degeneracy.
  double h2_tol = 0.0;
  /// Pinch floor on 2 d^2 h + (h'/sin)^2, relative to d^2 max|h|.
  double denominator_floor = 1e-14;
  Exec exec = Exec::parallel;
};

Field phi1(const HProfile& h, const RhsOptions& opts = {});
double phi2(const HProfile& h, const RhsOptions& opts = {});
double phi3(const HProfile& h, const RhsOptions& opts = {});
RhsEval full_rhs(const HProfile& h, const RhsOptions& opts = {});

/// Same evaluation from precomputed fields; throws AxisDegeneracyError or
/// PinchError.
RhsEval full_rhs(const Grid& grid, std::span<const double> h, double d, const QuotientFields& q,
                 const RhsOptions& opts = {});

/// Transport part of Phi1: [(1+cos)/h''(0) - (1-cos)/h''(pi)] h'/sin.
Field transport_term(const Grid& grid, const QuotientFields& q);

/// Fixed-frame square-profile equation
///   v_t = 2 v v_xx / (2v + v_x^2) - v_x^2 / (2v + v_x^2) - 1.
double oracle_vt(double v, double v_x, double v_xx, double tol = 0.0);

}  // namespace axiflow
