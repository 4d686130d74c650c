// axiflow: simulate, validate, spectrum and oracle-check front ends.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "axiflow/flow_rhs.hpp"
#include "axiflow/io.hpp"
#include "axiflow/linearization.hpp"
#include "axiflow/scenarios.hpp"
#include "axiflow/stepper.hpp"

namespace fs = std::filesystem;
using namespace axiflow;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailure = 2;

struct ScenarioArgs {
  std::string name = "sphere";
  double d0 = 1.0;
  double beta = 1.0;
  double mu = 0.5;
  double c0 = 0.0;
  std::string file;

  Scenario build() const {
    Scenario s;
    s.kind = file.empty() ? parse_scenario_kind(name) : ScenarioKind::file;
    s.d0 = d0;
    s.beta = beta;
    s.mu = mu;
    s.c0 = c0;
    s.path = file;
    s.validate();
    return s;
  }
};

void add_scenario_options(CLI::App* app, ScenarioArgs& a) {
  app->add_option("--scenario", a.name, "sphere, ellipsoid, dumbbell or remark213")->capture_default_str();
  app->add_option("--d0", a.d0, "initial half-width")->capture_default_str();
  app->add_option("--beta", a.beta, "ellipsoid axis ratio")->capture_default_str();
  app->add_option("--mu", a.mu, "dumbbell neck depth in (0, 1)")->capture_default_str();
  app->add_option("--c0", a.c0, "initial centre")->capture_default_str();
  app->add_option("--file", a.file, "initial profile: .json transplanted or x,v,u CSV");
}

struct RunConfig {
  ScenarioArgs scenario;
  FlowParams params;
  std::optional<double> d_min;
  std::string csv_path;
  std::string report_path;
  std::string snapshot_dir;
  int snapshot_stride = 0;
};

// Parameters a sweep may vary, by flag name.
const std::map<std::string, std::function<void(RunConfig&, double)>>& sweep_setters() {
  static const std::map<std::string, std::function<void(RunConfig&, double)>> setters = {
      {"d0", [](RunConfig& c, double x) { c.scenario.d0 = x; }},
      {"beta", [](RunConfig& c, double x) { c.scenario.beta = x; }},
      {"mu", [](RunConfig& c, double x) { c.scenario.mu = x; }},
      {"c0", [](RunConfig& c, double x) { c.scenario.c0 = x; }},
      {"n", [](RunConfig& c, double x) { c.params.n = static_cast<int>(x); }},
      {"t-max", [](RunConfig& c, double x) { c.params.t_max = x; }},
      {"cfl", [](RunConfig& c, double x) { c.params.cfl = x; }},
      {"rtol", [](RunConfig& c, double x) { c.params.rtol = x; }},
      {"atol", [](RunConfig& c, double x) { c.params.atol = x; }},
  };
  return setters;
}

struct Sweep {
  std::string key;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--sweep expects key=v1,v2,...");
  Sweep s{text.substr(0, eq), {}};
  if (!sweep_setters().contains(s.key)) throw std::invalid_argument("--sweep: cannot vary '" + s.key + "'");
  std::stringstream ss(text.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("--sweep: bad value '" + item + "'");
    s.values.push_back(x);
  }
  if (s.values.empty()) throw std::invalid_argument("--sweep: no values");
  return s;
}

std::string suffixed(const std::string& path, std::size_t k) {
  if (path.empty()) return path;
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + "_" + std::to_string(k) + p.extension().string())).string();
}

int env_thread_cap() {
  const char* s = std::getenv("AXIFLOW_THREADS");
  if (s == nullptr || *s == '\0') return 0;
  const int v = std::atoi(s);
  return v > 0 ? v : 0;
}

struct RunOutcome {
  int status = kOk;
  std::string summary;
};

RunOutcome simulate_one(const RunConfig& cfg) {
  RunOutcome out;
  std::ostringstream log;
  try {
    FlowParams params = cfg.params;
    params.thresholds.d_min = cfg.d_min;
    params.validate();
    const HProfile h0 = make_initial(cfg.scenario.build(), params.n);

    const ValidationReport v = validate_initial(h0);
    if (!v.passed()) {
      log << "initial profile rejected:";
      for (const Check& c : v.checks)
        if (!c.passed) log << ' ' << c.name << " (" << c.detail << ")";
      return {kInvalid, log.str()};
    }

    std::optional<TrajectoryCsvWriter> csv;
    if (!cfg.csv_path.empty()) csv.emplace(cfg.csv_path);
    if (!cfg.snapshot_dir.empty()) fs::create_directories(cfg.snapshot_dir);

    long accepted = 0;
    RunOptions opts;
    opts.observer = [&](const StepScalars& s, const HProfile& h) {
      if (csv) csv->write(s);
      if (cfg.snapshot_stride > 0 && accepted % cfg.snapshot_stride == 0) {
        char name[32];
        std::snprintf(name, sizeof name, "state_%08ld.json", accepted);
        write_hprofile_json(fs::path(cfg.snapshot_dir) / name, h);
      }
      ++accepted;
    };
    const auto [traj, report] = run(h0, params, opts);
    if (csv) csv->close();
    if (!cfg.snapshot_dir.empty() && !traj.states.empty())
      write_hprofile_json(fs::path(cfg.snapshot_dir) / "final.json", traj.states.back());
    if (!cfg.report_path.empty()) write_json(cfg.report_path, to_json(report));

    log << to_string(report.kind) << " t=" << format_double(report.t_event);
    if (report.theta_star) log << " theta*=" << format_double(*report.theta_star);
    log << " d=" << format_double(report.diagnostics.d) << " steps=" << report.accepted_steps << "/"
        << report.rejected_steps;
    if (!report.message.empty()) log << " (" << report.message << ")";
    out.status = report.kind == EventKind::StepFailure ? kFailure : kOk;
  } catch (const IoError& e) {
    log << "io error: " << e.what();
    out.status = kInvalid;
  } catch (const std::invalid_argument& e) {
    log << "invalid input: " << e.what();
    out.status = kInvalid;
  }
  out.summary = log.str();
  return out;
}

int cmd_simulate(const RunConfig& base, const std::string& sweep_spec, int jobs) {
  if (sweep_spec.empty()) {
    const RunOutcome r = simulate_one(base);
    (r.status == kOk ? std::cout : std::cerr) << r.summary << "\n";
    return r.status;
  }

  Sweep sweep;
  try {
    sweep = parse_sweep(sweep_spec);
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
  const int cap = env_thread_cap();
  if (cap > 0) jobs = std::min(jobs, cap);
  jobs = std::clamp(jobs, 1, static_cast<int>(sweep.values.size()));

  std::vector<RunConfig> configs(sweep.values.size(), base);
  for (std::size_t k = 0; k < configs.size(); ++k) {
    sweep_setters().at(sweep.key)(configs[k], sweep.values[k]);
    configs[k].csv_path = suffixed(base.csv_path, k);
    configs[k].report_path = suffixed(base.report_path, k);
    if (!base.snapshot_dir.empty())
      configs[k].snapshot_dir = (fs::path(base.snapshot_dir) / ("run_" + std::to_string(k))).string();
    // Concurrent runs share the machine; keep each one single-threaded.
    if (jobs > 1) configs[k].params.exec = Exec::serial;
  }

  std::vector<RunOutcome> outcomes(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < configs.size();) outcomes[k] = simulate_one(configs[k]);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = kOk;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    std::cout << sweep.key << "=" << format_double(sweep.values[k]) << ": " << outcomes[k].summary << "\n";
    if (outcomes[k].status == kInvalid) status = kInvalid;
    else if (outcomes[k].status == kFailure && status == kOk) status = kFailure;
  }
  return status;
}

void print_report(const std::string& title, const ValidationReport& r) {
  std::cout << title << "\n";
  for (const Check& c : r.checks) {
    std::cout << "  " << (c.passed ? "pass" : "FAIL") << "  " << c.name << "  " << format_double(c.value);
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
  }
}

int cmd_validate(const ScenarioArgs& args, int n) {
  HProfile h = sphere(16, 1.0);
  std::optional<PhysicalProfile> physical;
  if (!args.file.empty()) {
    const fs::path p(args.file);
    if (p.extension() == ".json") {
      h = read_hprofile_json(p);
    } else {
      physical = read_physical_csv(p);
      h = h_from_physical(*physical, n);
    }
  } else {
    h = make_initial(args.build(), n);
  }
  if (!physical) physical = physical_from_h(h);

  const ValidationReport admissible = validate_initial(h);
  const ValidationReport axis = axis_regularity_check(*physical);
  print_report("admissibility", admissible);
  print_report("axis regularity", axis);
  const EndpointFit fit = fit_endpoints(h.grid(), h.values());
  std::cout << "h''(0) = " << format_double(fit.h2_0()) << "\n"
            << "h''(pi) = " << format_double(fit.h2_pi()) << "\n";
  const bool ok = admissible.passed() && axis.passed();
  std::cout << (ok ? "valid" : "invalid") << "\n";
  return ok ? kOk : kInvalid;
}

std::vector<std::complex<double>> parse_lambdas(const std::vector<std::string>& items) {
  std::vector<std::complex<double>> out;
  for (const std::string& item : items) {
    const auto colon = item.find(':');
    const double re = std::stod(item.substr(0, colon));
    const double im = colon == std::string::npos ? 0.0 : std::stod(item.substr(colon + 1));
    out.emplace_back(re, im);
  }
  return out;
}

int cmd_spectrum(const ScenarioArgs& args, int n, std::optional<double> a1_const,
                 const std::vector<std::string>& lambda_items, const std::string& out_path) {
  const auto lambdas = parse_lambdas(lambda_items);
  const auto grid = Grid::shared(n);
  Matrix model;
  std::optional<HProfile> h0;
  Field a1;
  if (a1_const) {
    if (!(*a1_const > 0.0)) throw std::invalid_argument("--a1-const must be positive");
    a1.assign(grid->size(), *a1_const);
    model = assemble_A(*grid, a1);
  } else {
    h0 = make_initial(args.build(), n);
    a1 = coefficients(*h0).a1;
    model = assemble_A(*grid, a1);
  }

  const SpectrumReport rep = spectrum(model, lambdas);
  if (!out_path.empty()) write_json(out_path, to_json(rep));

  const auto [lo, hi] = std::minmax_element(a1.begin(), a1.end());
  std::cout << "A1 range: [" << format_double(*lo) << ", " << format_double(*hi) << "]\n"
            << "max real part: " << format_double(rep.max_real_part) << "\n"
            << "kernel residual: " << format_double(rep.kernel_residual) << "\n";
  const std::size_t shown = std::min<std::size_t>(rep.eigenvalues.size(), 6);
  for (std::size_t k = 0; k < shown; ++k)
    std::cout << "  lambda_" << k << " = " << format_double(rep.eigenvalues[k].real()) << " + "
              << format_double(rep.eigenvalues[k].imag()) << "i\n";
  for (const ResolventSample& s : rep.resolvent)
    std::cout << "  kappa(" << format_double(s.lambda.real()) << "+" << format_double(s.lambda.imag())
              << "i) = " << format_double(s.kappa) << "\n";

  bool converged = rep.converged;
  if (h0) {
    const SpectrumReport lin = spectrum(pinned_block(assemble_frechet(*h0)), {});
    std::cout << "linearization max real part: " << format_double(lin.max_real_part) << "\n";
    converged = converged && lin.converged;
  }
  if (!converged) {
    std::cerr << "eigensolver did not converge\n";
    return kFailure;
  }
  return kOk;
}

struct OracleProfile {
  // h = p(cos theta) with p, p', p''.
  std::function<double(double)> p, dp, ddp;
};

OracleProfile oracle_profile(const std::string& name) {
  if (name == "quartic")
    return {[](double y) { return 0.5 * (1 - y * y * y * y); }, [](double y) { return -2 * y * y * y; },
            [](double y) { return -6 * y * y; }};
  if (name == "sphere")
    return {[](double y) { return 0.5 * (1 - y * y); }, [](double y) { return -y; }, [](double) { return -1.0; }};
  throw std::invalid_argument("unknown oracle profile '" + name + "'");
}

// Max error of Phi1 minus transport against the fixed-frame equation on
// theta in [pi/8, 7pi/8], and the magnitude of the reference there.
std::pair<double, double> oracle_error(const OracleProfile& prof, int n) {
  const auto grid = Grid::shared(n);
  Field values(grid->size());
  for (int j = 0; j <= n; ++j) values[j] = prof.p(grid->cos()[j]);
  values[0] = values[n] = 0.0;
  const HProfile h(std::move(values), 0.0, 1.0);
  const Field p1 = phi1(h);
  const Field tr = transport_term(*grid, quotient_fields(*grid, h.values()));
  const double pi = std::numbers::pi;
  double err = 0.0, scale = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double t = grid->theta()[j];
    if (t < pi / 8 - 1e-12 || t > 7 * pi / 8 + 1e-12) continue;
    const double y = grid->cos()[j], s = grid->sin()[j];
    const double h1 = -s * prof.dp(y);
    const double h2 = s * s * prof.ddp(y) - y * prof.dp(y);
    const double vt = oracle_vt(h.values()[j], h1 / s, (h2 - h1 * y / s) / (s * s));
    err = std::max(err, std::abs(p1[j] - tr[j] - vt));
    scale = std::max(scale, std::abs(vt));
  }
  return {err, scale};
}

int cmd_oracle_check(std::vector<int> ns, const std::string& profile_name) {
  const OracleProfile prof = oracle_profile(profile_name);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) Grid::shared(n);

  std::vector<double> errs;
  double scale = 0.0;
  std::cout << "n,error,order\n";
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto [e, s] = oracle_error(prof, ns[k]);
    errs.push_back(e);
    scale = s;
    std::cout << ns[k] << "," << format_double(e) << ",";
    if (k > 0 && e > 0.0 && errs[k - 1] > 0.0)
      std::cout << format_double(std::log(errs[k - 1] / e) / std::log(double(ns[k]) / ns[k - 1]));
    std::cout << "\n";
  }

  const bool small = errs.back() <= 1e-6 * scale;
  bool ordered = true;
  if (ns.size() >= 2) {
    // Least-squares slope of log error against log n.
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      mx += std::log(double(ns[k]));
      my += std::log(std::max(errs[k], 1e-300));
    }
    mx /= ns.size();
    my /= ns.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const double dx = std::log(double(ns[k])) - mx;
      sxy += dx * (std::log(std::max(errs[k], 1e-300)) - my);
      sxx += dx * dx;
    }
    const double order = -sxy / sxx;
    // Errors already at rounding level carry no order information.
    ordered = order >= 3.0 || errs.front() <= 1e-12 * scale;
    std::cout << "observed order: " << format_double(order) << "\n";
  } else {
    std::cout << "observed order: n/a (single resolution)\n";
  }
  std::cout << "finest relative error: " << format_double(errs.back() / scale) << "\n";
  const bool ok = small && ordered;
  std::cout << (ok ? "consistent" : "inconsistent") << "\n";
  return ok ? kOk : kInvalid;
}

// Splices the key=value lines of a --config file in front of the flags that
// follow the subcommand, so flags given on the command line are seen last.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;

  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open config file");
  std::vector<std::string> injected;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string t) {
      const auto a = t.find_first_not_of(" \t");
      const auto b = t.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) != 0) key = "--" + key;
    injected.push_back(key);
    injected.push_back(trim(line.substr(eq + 1)));
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric mean curvature flow in transplanted variables"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string sweep_spec;
  int jobs = 1;
  double d_min = 0.0;
  auto* sim = app.add_subcommand("simulate", "evolve an initial surface until an event or t-max");
  sim->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_scenario_options(sim, cfg.scenario);
  sim->add_option("--n", cfg.params.n, "grid intervals on [0, pi]")->capture_default_str();
  sim->add_option("--t-max", cfg.params.t_max)->capture_default_str();
  sim->add_option("--dt-init", cfg.params.dt_init)->capture_default_str();
  sim->add_option("--rtol", cfg.params.rtol)->capture_default_str();
  sim->add_option("--atol", cfg.params.atol)->capture_default_str();
  sim->add_option("--cfl", cfg.params.cfl)->capture_default_str();
  sim->add_option("--max-steps", cfg.params.max_steps)->capture_default_str();
  sim->add_option("--d-min", d_min, "absolute extinction threshold on d");
  sim->add_option("--d-min-rel", cfg.params.thresholds.d_min_rel)->capture_default_str();
  sim->add_option("--h-min", cfg.params.thresholds.h_min, "pinch threshold on min h/sin^2, relative to d^2")
      ->capture_default_str();
  sim->add_option("--h2-min-rel", cfg.params.thresholds.h2_min_rel)->capture_default_str();
  sim->add_option("--csv", cfg.csv_path, "trajectory CSV");
  sim->add_option("--report", cfg.report_path, "event report JSON");
  sim->add_option("--snapshot-dir", cfg.snapshot_dir, "directory for state JSON snapshots");
  sim->add_option("--snapshot-stride", cfg.snapshot_stride, "write every k-th accepted state")->capture_default_str();
  sim->add_option("--sweep", sweep_spec, "vary one parameter: key=v1,v2,...");
  sim->add_option("--jobs", jobs, "concurrent sweep runs (capped by AXIFLOW_THREADS)")->check(CLI::PositiveNumber);
  std::string config_path;
  sim->add_option("--config", config_path, "key=value file of simulate flags; command-line flags win");

  ScenarioArgs val_args;
  int val_n = 256;
  auto* val = app.add_subcommand("validate", "check an initial profile for admissibility and axis regularity");
  add_scenario_options(val, val_args);
  val->add_option("--n", val_n, "grid used to resample CSV input")->capture_default_str();

  ScenarioArgs spec_args;
  int spec_n = 256;
  double a1_const = 0.0;
  std::vector<std::string> lambda_items;
  std::string spec_out;
  auto* spec = app.add_subcommand("spectrum", "eigenvalues and resolvent of the model operator");
  add_scenario_options(spec, spec_args);
  spec->add_option("--n", spec_n)->capture_default_str();
  auto* a1_opt = spec->add_option("--a1-const", a1_const, "use a constant A1 instead of a scenario");
  spec->add_option("--lambdas", lambda_items, "resolvent samples re[:im]")->delimiter(',');
  spec->add_option("--out", spec_out, "spectrum report JSON");

  std::vector<int> oracle_ns{128, 256, 512};
  std::string oracle_profile_name = "quartic";
  auto* orc = app.add_subcommand("oracle-check", "consistency of the transplanted equation with the fixed frame");
  orc->add_option("--n", oracle_ns, "resolutions")->delimiter(',')->capture_default_str();
  orc->add_option("--profile", oracle_profile_name, "quartic or sphere")->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args.front() == "simulate") args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kInvalid;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*sim) {
      if (sim->count("--d-min") > 0) cfg.d_min = d_min;
      return cmd_simulate(cfg, sweep_spec, jobs);
    }
    if (*val) return cmd_validate(val_args, val_n);
    if (*spec) return cmd_spectrum(spec_args, spec_n, a1_opt->count() > 0 ? std::optional(a1_const) : std::nullopt,
                                   lambda_items, spec_out);
    if (*orc) return cmd_oracle_check(oracle_ns, oracle_profile_name);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kInvalid;
}
