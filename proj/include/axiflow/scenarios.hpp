#pragma once

// Initial data library. Every profile is sampled analytically on the grid.

#include <string>

#include "axiflow/profile.hpp"

namespace axiflow {

enum class ScenarioKind { sphere, ellipsoid, dumbbell, remark213, file };

struct Scenario {
  ScenarioKind kind = ScenarioKind::sphere;
  double d0 = 1.0;
  double beta = 1.0;  // ellipsoid axis ratio
  double mu = 0.5;    // dumbbell neck depth, in (0, 1)
  double c0 = 0.0;
  std::string path;   // file scenario: .json profile or x,v,u CSV

  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

/// h = d0^2 sin^2 / 2: the sphere of radius d0.
HProfile sphere(int n, double d0, double c0 = 0.0);
/// h = beta^2 d0^2 sin^2 / 2: spheroid with polar half-axis d0, equatorial radius beta d0.
HProfile ellipsoid(int n, double d0, double beta, double c0 = 0.0);
/// h = d0^2 sin^2 (1 - mu sin^2) / 2: two bulbs joined by a neck at theta = pi/2.
HProfile dumbbell(int n, double d0, double mu, double c0 = 0.0);
/// v = 1 - x^2 + (1 - x^2)^(3/2) on [-1, 1], i.e. h = sin^2 + sin^3: admissible
/// although v is not C^2 at the axis.
HProfile remark213(int n);

HProfile make_initial(const Scenario& s, int n);

}  // namespace axiflow
