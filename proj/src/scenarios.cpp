#include "axiflow/scenarios.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "axiflow/io.hpp"

namespace axiflow {

namespace {

template <class F>
HProfile sampled(int n, double c0, double d0, F&& shape) {
  const auto grid = Grid::shared(n);
  const auto s = grid->sin();
  std::vector<double> values(grid->size());
  for (int j = 0; j <= n; ++j) values[j] = shape(s[j]);
  values[0] = 0.0;
  values[n] = 0.0;
  return HProfile(std::move(values), c0, d0);
}

}  // namespace

void Scenario::validate() const {
  if (!(d0 > 0.0)) throw std::invalid_argument("scenario: d0 must be positive");
  if (!std::isfinite(c0)) throw std::invalid_argument("scenario: c0 must be finite");
  if (kind == ScenarioKind::ellipsoid && !(beta > 0.0)) throw std::invalid_argument("scenario: beta must be positive");
  if (kind == ScenarioKind::dumbbell && !(mu > 0.0 && mu < 1.0)) {
    throw std::invalid_argument("scenario: mu must lie in (0, 1)");
  }
  if (kind == ScenarioKind::file && path.empty()) throw std::invalid_argument("scenario: file scenario needs a path");
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "sphere") return ScenarioKind::sphere;
  if (name == "ellipsoid") return ScenarioKind::ellipsoid;
  if (name == "dumbbell") return ScenarioKind::dumbbell;
  if (name == "remark213") return ScenarioKind::remark213;
  if (name == "file") return ScenarioKind::file;
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::sphere: return "sphere";
    case ScenarioKind::ellipsoid: return "ellipsoid";
    case ScenarioKind::dumbbell: return "dumbbell";
    case ScenarioKind::remark213: return "remark213";
    case ScenarioKind::file: return "file";
  }
  return "unknown";
}

HProfile sphere(int n, double d0, double c0) {
  return sampled(n, c0, d0, [&](double s) { return 0.5 * d0 * d0 * s * s; });
}

HProfile ellipsoid(int n, double d0, double beta, double c0) {
  return sampled(n, c0, d0, [&](double s) { return 0.5 * beta * beta * d0 * d0 * s * s; });
}

HProfile dumbbell(int n, double d0, double mu, double c0) {
  return sampled(n, c0, d0, [&](double s) { return 0.5 * d0 * d0 * s * s * (1.0 - mu * s * s); });
}

HProfile remark213(int n) {
  return sampled(n, 0.0, 1.0, [](double s) { return s * s + s * s * s; });
}

HProfile make_initial(const Scenario& s, int n) {
  s.validate();
  switch (s.kind) {
    case ScenarioKind::sphere: return sphere(n, s.d0, s.c0);
    case ScenarioKind::ellipsoid: return ellipsoid(n, s.d0, s.beta, s.c0);
    case ScenarioKind::dumbbell: return dumbbell(n, s.d0, s.mu, s.c0);
    case ScenarioKind::remark213: return remark213(n);
    case ScenarioKind::file: {
      const std::filesystem::path p(s.path);
      if (p.extension() == ".json") {
        HProfile h = read_hprofile_json(p);
        if (h.n() == n) return h;
        return h_from_physical(physical_from_h(h), n);
      }
      return h_from_physical(read_physical_csv(p), n);
    }
  }
  throw std::invalid_argument("make_initial: unknown scenario");
}

}  // namespace axiflow
