#include "axiflow/flow_rhs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "axiflow/errors.hpp"

namespace axiflow {

namespace {

void check_poles(const EndpointFit& fit, double tol) {
  if (!(fit.h2_0() > tol) || !(fit.h2_pi() > tol)) {
    std::ostringstream os;
    os << "axis degeneracy: h''(0) = " << fit.h2_0() << ", h''(pi) = " << fit.h2_pi();
    throw AxisDegeneracyError(os.str(), fit.h2_0(), fit.h2_pi());
  }
}

}  // namespace

QuotientFields quotient_fields(const Grid& grid, std::span<const double> h) {
  QuotientFields q;
  q.fit = fit_endpoints(grid, h);
  q.d1 = diff1(grid, h);
  q.d2 = diff2(grid, h);
  q.s2 = quot_sin2(grid, h, q.fit);
  q.ds = quot_dsin(grid, h, q.d1, q.fit);
  q.dt = quot_dtan(grid, h, q.d1, q.fit);
  q.r.resize(h.size());
  const int n = grid.n();
  for (int j = 1; j < n; ++j) q.r[j] = q.d2[j] - q.dt[j];
  q.r[0] = 0.0;
  q.r[n] = 0.0;
  return q;
}

RhsEval full_rhs(const Grid& grid, std::span<const double> h, double d, const QuotientFields& q,
                 const RhsOptions& opts) {
  check_poles(q.fit, opts.h2_tol);
  RhsEval out;
  out.h2_0 = q.fit.h2_0();
  out.h2_pi = q.fit.h2_pi();
  const double inv0 = 1.0 / out.h2_0;
  const double invpi = 1.0 / out.h2_pi;

  kernels::PointwiseInputs in{h, q.s2, q.ds, q.r, grid.cos(), d, inv0, invpi};
  out.h_t.assign(h.size(), 0.0);
  const auto res = kernels::phi1(in, out.h_t, opts.exec);

  double hmax = 0.0;
  for (double x : h) hmax = std::max(hmax, std::abs(x));
  if (res.argmin >= 0 && !(res.min_denominator > opts.denominator_floor * d * d * hmax)) {
    std::ostringstream os;
    os << "pinch: 2 d^2 h + (h'/sin)^2 = " << res.min_denominator << " at node " << res.argmin;
    throw PinchError(os.str(), res.argmin);
  }
  out.c_dot = d * (inv0 - invpi);
  out.d_dot = -d * (inv0 + invpi);
  return out;
}

RhsEval full_rhs(const HProfile& h, const RhsOptions& opts) {
  const QuotientFields q = quotient_fields(h.grid(), h.values());
  return full_rhs(h.grid(), h.values(), h.d(), q, opts);
}

Field phi1(const HProfile& h, const RhsOptions& opts) { return full_rhs(h, opts).h_t; }

double phi2(const HProfile& h, const RhsOptions& opts) {
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  check_poles(fit, opts.h2_tol);
  return h.d() * (1.0 / fit.h2_0() - 1.0 / fit.h2_pi());
}

double phi3(const HProfile& h, const RhsOptions& opts) {
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  check_poles(fit, opts.h2_tol);
  return -h.d() * (1.0 / fit.h2_0() + 1.0 / fit.h2_pi());
}

Field transport_term(const Grid& grid, const QuotientFields& q) {
  const auto c = grid.cos();
  const double inv0 = 1.0 / q.fit.h2_0();
  const double invpi = 1.0 / q.fit.h2_pi();
  Field out(q.ds.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = ((1.0 + c[j]) * inv0 - (1.0 - c[j]) * invpi) * q.ds[j];
  return out;
}

double oracle_vt(double v, double v_x, double v_xx, double tol) {
  const double den = 2.0 * v + v_x * v_x;
  if (!(den > tol)) throw std::domain_error("oracle_vt: degenerate denominator 2v + v_x^2");
  return 2.0 * v * v_xx / den - v_x * v_x / den - 1.0;
}

}  // namespace axiflow
