#include "axiflow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "axiflow/errors.hpp"

namespace axiflow {

namespace {

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

struct Deriv {
  Field h;
  double c;
  double d;
};

Deriv eval(const HProfile& s, const RhsOptions& opts) {
  RhsEval r = full_rhs(s, opts);
  return {std::move(r.h_t), r.c_dot, r.d_dot};
}

// state + dt * k, rejected when it leaves the admissible set.
HProfile advance(const HProfile& s, double dt, const Deriv& k) {
  const auto h = s.values();
  const int n = s.n();
  std::vector<double> out(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) out[j] = h[j] + dt * k.h[j];
  out[0] = 0.0;
  out[n] = 0.0;
  const double d = s.d() + dt * k.d;
  if (!(d > 0.0)) throw StepRejected("half-width became non-positive");
  for (int j = 1; j < n; ++j) {
    if (!(out[j] > 0.0)) throw StepRejected("interior h became non-positive at node " + std::to_string(j));
  }
  return HProfile(std::move(out), s.c() + dt * k.c, d);
}

double error_norm(const HProfile& coarse, const HProfile& fine, const FlowParams& p) {
  const double d = fine.d();
  const auto hc = coarse.values();
  const auto hf = fine.values();
  double dh = 0.0;
  for (std::size_t j = 0; j < hf.size(); ++j) dh = std::max(dh, std::abs(hc[j] - hf[j]));
  const double eh = dh / (p.rtol * max_abs(hf) + p.atol * d * d);
  const double len = p.rtol * d + p.atol * d;
  const double ed = std::abs(coarse.d() - d) / len;
  const double ec = std::abs(coarse.c() - fine.c()) / len;
  return std::max({eh, ed, ec});
}

}  // namespace

void FlowParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("FlowParams: " + what); };
  if (n < 16 || n % 2 != 0) fail("n must be an even integer >= 16");
  if (!(dt_init > 0.0)) fail("dt_init must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) fail("safety must lie in (0, 1]");
  if (!(atol > 0.0) || !(rtol > 0.0)) fail("atol and rtol must be positive");
  if (!(t_max > 0.0)) fail("t_max must be positive");
  if (!(cfl > 0.0)) fail("cfl must be positive");
  if (!(thresholds.d_min_rel > 0.0) || !(thresholds.h_min > 0.0) || !(thresholds.h2_min_rel > 0.0)) {
    fail("event thresholds must be positive");
  }
  if (thresholds.d_min && !(*thresholds.d_min > 0.0)) fail("d_min must be positive");
  if (max_steps <= 0) fail("max_steps must be positive");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Extinction: return "Extinction";
    case EventKind::NeckPinch: return "NeckPinch";
    case EventKind::AxisDegeneracy: return "AxisDegeneracy";
    case EventKind::MaxTimeReached: return "MaxTimeReached";
    case EventKind::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

ResolvedThresholds resolve_thresholds(const EventThresholds& th, const HProfile& initial) {
  const EndpointFit fit = fit_endpoints(initial.grid(), initial.values());
  const double d2 = initial.d() * initial.d();
  ResolvedThresholds r;
  r.d_min = th.d_min ? *th.d_min : th.d_min_rel * initial.d();
  r.h_min = th.h_min;
  r.h2_min = th.h2_min_rel * std::max(fit.h2_0(), fit.h2_pi()) / d2;
  return r;
}

NeckMeasure neck_measure(const HProfile& h) {
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  const Field s2 = quot_sin2(h.grid(), h.values(), fit);
  NeckMeasure m{s2[1], 1};
  for (int j = 2; j < h.n(); ++j) {
    if (s2[j] < m.value) m = {s2[j], j};
  }
  return m;
}

double surface_area(const HProfile& h) {
  const Grid& grid = h.grid();
  const QuotientFields q = quotient_fields(grid, h.values());
  const auto s = grid.sin();
  const double dd = 2.0 * h.d() * h.d();
  Field g(grid.size());
  for (int j = 0; j <= grid.n(); ++j) {
    const double s2 = s[j] * s[j];
    g[j] = s[j] * std::sqrt(std::max(dd * q.s2[j] * s2 + q.ds[j] * q.ds[j], 0.0));
  }
  return 2.0 * std::numbers::pi * simpson(grid, g);
}

StepScalars scalars(const HProfile& h, double t) {
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  StepScalars s;
  s.t = t;
  s.a = h.a();
  s.b = h.b();
  s.c = h.c();
  s.d = h.d();
  s.area = surface_area(h);
  s.min_h = neck_measure(h).value;
  s.h2_0 = fit.h2_0();
  s.h2_pi = fit.h2_pi();
  return s;
}

HProfile step_rk4(const HProfile& state, double dt, const RhsOptions& opts) {
  if (dt == 0.0) return state;
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be non-negative");
  const Deriv k1 = eval(state, opts);
  const Deriv k2 = eval(advance(state, 0.5 * dt, k1), opts);
  const Deriv k3 = eval(advance(state, 0.5 * dt, k2), opts);
  const Deriv k4 = eval(advance(state, dt, k3), opts);
  Deriv k{Field(k1.h.size()), 0.0, 0.0};
  for (std::size_t j = 0; j < k.h.size(); ++j) k.h[j] = (k1.h[j] + 2.0 * (k2.h[j] + k3.h[j]) + k4.h[j]) / 6.0;
  k.c = (k1.c + 2.0 * (k2.c + k3.c) + k4.c) / 6.0;
  k.d = (k1.d + 2.0 * (k2.d + k3.d) + k4.d) / 6.0;
  return advance(state, dt, k);
}

double adapt_dt(double err, double dt, const FlowParams& params) {
  const double factor = err > 0.0 ? params.safety * std::pow(err, -0.2) : 4.0;
  return dt * std::clamp(factor, 0.25, 4.0);
}

double stable_dt(const HProfile& state, const FlowParams& params) {
  const Grid& grid = state.grid();
  const QuotientFields q = quotient_fields(grid, state.values());
  const auto h = state.values();
  const double dd = 2.0 * state.d() * state.d();
  double a1max = 0.0;
  for (int j = 0; j <= grid.n(); ++j) {
    const double den = dd * h[j] + q.ds[j] * q.ds[j];
    if (den > 0.0) a1max = std::max(a1max, 2.0 * q.s2[j] / den);
  }
  if (!(a1max > 0.0)) return params.t_max;
  return params.cfl * grid.dtheta() * grid.dtheta() / a1max;
}

std::optional<SingularityReport> detect_event(const HProfile& state, const ResolvedThresholds& th, double t) {
  SingularityReport rep;
  rep.t_event = t;
  const double d2 = state.d() * state.d();
  if (state.d() < th.d_min) {
    rep.kind = EventKind::Extinction;
    rep.message = "half-width below extinction threshold";
    return rep;
  }
  const NeckMeasure neck = neck_measure(state);
  if (neck.value < th.h_min * d2) {
    rep.kind = EventKind::NeckPinch;
    rep.theta_star = state.grid().theta()[neck.node];
    rep.message = "neck measure h/sin^2 below pinch threshold";
    return rep;
  }
  const EndpointFit fit = fit_endpoints(state.grid(), state.values());
  if (fit.h2_0() / d2 < th.h2_min || fit.h2_pi() / d2 < th.h2_min) {
    rep.kind = EventKind::AxisDegeneracy;
    rep.theta_star = fit.h2_0() / d2 < th.h2_min ? 0.0 : std::numbers::pi;
    rep.message = "endpoint second derivative below degeneracy threshold";
    return rep;
  }
  return std::nullopt;
}

std::pair<Trajectory, SingularityReport> run(const HProfile& initial, const FlowParams& params,
                                             const RunOptions& opts) {
  params.validate();
  const ResolvedThresholds th = resolve_thresholds(params.thresholds, initial);
  RhsOptions rhs;
  rhs.exec = params.exec;

  Trajectory traj;
  HProfile state = initial;
  double t = 0.0;
  StepScalars row = scalars(state, t);
  traj.rows.push_back(row);
  traj.state_times.push_back(t);
  traj.states.push_back(state);
  if (opts.observer) opts.observer(row, state);

  SingularityReport report;
  auto finish = [&](SingularityReport rep) {
    rep.accepted_steps = report.accepted_steps;
    rep.rejected_steps = report.rejected_steps;
    rep.monotonicity_violations = report.monotonicity_violations;
    rep.diagnostics = traj.rows.back();
    if (traj.state_times.back() != t) {
      traj.state_times.push_back(t);
      traj.states.push_back(state);
    }
    return std::make_pair(std::move(traj), std::move(rep));
  };

  if (auto ev = detect_event(state, th, t)) return finish(*ev);

  double dt = params.dt_init;
  const double dt_floor = 1e-14 * params.t_max;
  while (t < params.t_max) {
    if (report.accepted_steps + report.rejected_steps >= params.max_steps) {
      SingularityReport rep;
      rep.kind = EventKind::StepFailure;
      rep.t_event = t;
      rep.message = "step budget exhausted";
      return finish(rep);
    }
    double h_try = std::min({dt, stable_dt(state, params), params.t_max - t});
    if (h_try < dt_floor && t + h_try < params.t_max) {
      SingularityReport rep;
      rep.kind = EventKind::StepFailure;
      rep.t_event = t;
      rep.message = "time step underflow";
      return finish(rep);
    }
    std::optional<HProfile> fine;
    double err = 0.0;
    try {
      const HProfile coarse = step_rk4(state, h_try, rhs);
      fine = step_rk4(step_rk4(state, 0.5 * h_try, rhs), 0.5 * h_try, rhs);
      err = error_norm(coarse, *fine, params);
    } catch (const StepRejected&) {
      fine.reset();
    } catch (const AxisDegeneracyError&) {
      fine.reset();
    } catch (const PinchError&) {
      fine.reset();
    }
    if (!fine || !(err <= 1.0)) {
      ++report.rejected_steps;
      dt = fine ? adapt_dt(err, h_try, params) : 0.5 * h_try;
      if (dt < dt_floor) {
        SingularityReport rep;
        rep.kind = EventKind::StepFailure;
        rep.t_event = t;
        rep.message = "time step underflow after rejection";
        return finish(rep);
      }
      continue;
    }

    const double a_prev = state.a();
    const double b_prev = state.b();
    state = std::move(*fine);
    t = (params.t_max - t <= h_try) ? params.t_max : t + h_try;
    ++report.accepted_steps;
    if (!(state.a() > a_prev) || !(state.b() < b_prev)) ++report.monotonicity_violations;

    row = scalars(state, t);
    row.dt = h_try;
    traj.rows.push_back(row);
    if (opts.state_stride > 0 && report.accepted_steps % opts.state_stride == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(state);
    }
    if (opts.observer) opts.observer(row, state);

    if (auto ev = detect_event(state, th, t)) return finish(*ev);
    dt = adapt_dt(err, h_try, params);
  }
  SingularityReport rep;
  rep.kind = EventKind::MaxTimeReached;
  rep.t_event = t;
  rep.message = "reached t_max";
  return finish(rep);
}

}  // namespace axiflow
