#pragma once

// Method-of-lines integration of (h, c, d)' = (Phi1, Phi2, Phi3) with
// classical RK4, step-doubling error control, a parabolic stability clamp
// and detection of the singular events that end a run.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axiflow/flow_rhs.hpp"
#include "axiflow/profile.hpp"

namespace axiflow {

struct EventThresholds {
  /// Extinction once d < d_min_rel * d(0), or d < d_min when given.
  double d_min_rel = 1e-3;
  std::optional<double> d_min;
  /// Neck pinch once min over interior nodes of h/sin^2 falls below h_min d^2.
  double h_min = 1e-4;
  /// Axis degeneracy once h''(pole)/d^2 falls below h2_min_rel times its
  /// initial maximum over both poles.
  double h2_min_rel = 1e-3;
};

struct FlowParams {
  int n = 256;
  double dt_init = 1e-6;
  double safety = 0.9;
  /// Step-doubling tolerances; atol is in units of the current scale
  /// (d for c and d, d^2 for h).
  double atol = 1e-10;
  double rtol = 1e-7;
  double t_max = 1.0;
  /// Explicit stability clamp dt <= cfl * dtheta^2 / max A1.
  double cfl = 0.25;
  EventThresholds thresholds;
  long max_steps = 100'000'000;
  Exec exec = Exec::parallel;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct ResolvedThresholds {
  double d_min = 0.0;
  double h_min = 0.0;   // relative to d^2
  double h2_min = 0.0;  // threshold on h''(pole) / d^2
};

ResolvedThresholds resolve_thresholds(const EventThresholds& th, const HProfile& initial);

/// Per-step scalars. min_h is the neck measure min over interior nodes of
/// h/sin^2, which stays O(d^2) near the poles and vanishes at a pinch.
struct StepScalars {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double area = 0.0;
  double min_h = 0.0;
  double h2_0 = 0.0;
  double h2_pi = 0.0;
  double dt = 0.0;
};

struct Trajectory {
  std::vector<StepScalars> rows;
  std::vector<double> state_times;
  std::vector<HProfile> states;
};

enum class EventKind { Extinction, NeckPinch, AxisDegeneracy, MaxTimeReached, StepFailure };

std::string_view to_string(EventKind kind);

struct SingularityReport {
  EventKind kind = EventKind::MaxTimeReached;
  double t_event = 0.0;
  std::optional<double> theta_star;
  StepScalars diagnostics;
  std::string message;
  long accepted_steps = 0;
  long rejected_steps = 0;
  long monotonicity_violations = 0;  // accepted steps where a fell or b rose
};

/// Surface area 2 pi int_0^pi sin sqrt(2 d^2 (h/sin^2) sin^2 + (h'/sin)^2) dtheta.
double surface_area(const HProfile& h);

struct NeckMeasure {
  double value;  // min over interior nodes of h/sin^2
  int node;
};
NeckMeasure neck_measure(const HProfile& h);

StepScalars scalars(const HProfile& h, double t);

/// Thrown by step_rk4 when a stage leaves the admissible set.
class StepRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One classical RK4 step of the coupled system; pole values re-pinned.
HProfile step_rk4(const HProfile& state, double dt, const RhsOptions& opts = {});

/// New step from a normalized error estimate (tolerance = 1):
/// safety * dt * err^(-1/5), clamped to [dt/4, 4 dt].
double adapt_dt(double err, double dt, const FlowParams& params);

/// Stability bound cfl * dtheta^2 / max A1, A1 = 2 (h/sin^2) / (2 d^2 h + (h'/sin)^2).
double stable_dt(const HProfile& state, const FlowParams& params);

/// Priority: Extinction, then NeckPinch, then AxisDegeneracy.
std::optional<SingularityReport> detect_event(const HProfile& state, const ResolvedThresholds& th, double t = 0.0);

struct RunOptions {
  /// Keep every k-th accepted state in the trajectory (0: first and last only).
  int state_stride = 0;
  /// Called with every accepted state, the initial one included.
  std::function<void(const StepScalars&, const HProfile&)> observer;
};

std::pair<Trajectory, SingularityReport> run(const HProfile& initial, const FlowParams& params,
                                             const RunOptions& opts = {});

}  // namespace axiflow
