#include "axiflow/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

namespace axiflow {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  return is;
}

double parse_double(std::string_view tok, const std::string& origin, int line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw IoError(origin + ":" + std::to_string(line) + ": cannot parse number '" + std::string(tok) + "'");
  }
  return x;
}

nlohmann::json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_physical_csv(std::ostream& os, const PhysicalProfile& p) {
  os << "x,v,u\n";
  for (std::size_t i = 0; i < p.xs().size(); ++i) {
    os << format_double(p.xs()[i]) << ',' << format_double(p.v()[i]) << ',' << format_double(p.u()[i]) << '\n';
  }
}

void write_physical_csv(const std::filesystem::path& path, const PhysicalProfile& p) {
  auto os = open_out(path);
  write_physical_csv(os, p);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

PhysicalProfile read_physical_csv(std::istream& is, const std::string& origin) {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw IoError(origin + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,v,u" && line != "x,v") throw IoError(origin + ": expected header 'x,v,u', got '" + line + "'");
  std::vector<double> xs, vs;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::string_view rest(line);
    const auto c1 = rest.find(',');
    if (c1 == std::string_view::npos) throw IoError(origin + ":" + std::to_string(lineno) + ": expected x,v,u");
    xs.push_back(parse_double(rest.substr(0, c1), origin, lineno));
    rest.remove_prefix(c1 + 1);
    const auto c2 = rest.find(',');
    vs.push_back(parse_double(rest.substr(0, c2), origin, lineno));
  }
  try {
    return PhysicalProfile(std::move(xs), std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw IoError(origin + ": " + e.what());
  }
}

PhysicalProfile read_physical_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_physical_csv(is, path.string());
}

nlohmann::json to_json(const HProfile& h) {
  return {{"c", h.c()}, {"d", h.d()}, {"n", h.n()},
          {"values", std::vector<double>(h.values().begin(), h.values().end())}};
}

HProfile hprofile_from_json(const nlohmann::json& j) {
  try {
    auto values = j.at("values").get<std::vector<double>>();
    const int n = j.at("n").get<int>();
    if (static_cast<int>(values.size()) != n + 1) {
      throw IoError("profile has n = " + std::to_string(n) + " but " + std::to_string(values.size()) + " values");
    }
    return HProfile(std::move(values), j.at("c").get<double>(), j.at("d").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed profile JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid profile: ") + e.what());
  }
}

void write_hprofile_json(const std::filesystem::path& path, const HProfile& h) { write_json(path, to_json(h)); }

HProfile read_hprofile_json(const std::filesystem::path& path) {
  auto is = open_in(path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    return hprofile_from_json(j);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

nlohmann::json to_json(const SingularityReport& r) {
  const StepScalars& s = r.diagnostics;
  nlohmann::json diag = {{"t", s.t},         {"a", s.a},           {"b", s.b},
                         {"c", s.c},         {"d", s.d},           {"area", s.area},
                         {"min_h", s.min_h}, {"h2_0", s.h2_0},     {"h2_pi", s.h2_pi},
                         {"accepted_steps", r.accepted_steps},     {"rejected_steps", r.rejected_steps},
                         {"monotonicity_violations", r.monotonicity_violations},
                         {"message", r.message}};
  return {{"kind", std::string(to_string(r.kind))},
          {"t_event", r.t_event},
          {"theta_star", r.theta_star ? nlohmann::json(*r.theta_star) : nlohmann::json(nullptr)},
          {"diagnostics", diag}};
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& z : r.eigenvalues) ev.push_back({{"re", z.real()}, {"im", z.imag()}});
  nlohmann::json res = nlohmann::json::array();
  for (const auto& s : r.resolvent) {
    res.push_back({{"lambda", {{"re", s.lambda.real()}, {"im", s.lambda.imag()}}}, {"kappa", number_or_null(s.kappa)}});
  }
  return {{"eigenvalues", ev},
          {"max_real_part", r.max_real_part},
          {"kernel_residual", r.kernel_residual},
          {"resolvent", res},
          {"converged", r.converged},
          {"kappa_bounded", r.kappa_bounded}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::string trajectory_csv_row(const StepScalars& s) {
  std::string out;
  for (double x : {s.t, s.a, s.b, s.c, s.d, s.area, s.min_h, s.h2_0, s.h2_pi}) {
    if (!out.empty()) out += ',';
    out += format_double(x);
  }
  return out;
}

TrajectoryCsvWriter::TrajectoryCsvWriter(const std::filesystem::path& path) : path_(path), out_(open_out(path)) {
  out_ << kTrajectoryHeader << '\n';
}

void TrajectoryCsvWriter::write(const StepScalars& s) {
  out_ << trajectory_csv_row(s) << '\n';
  if (!out_) throw IoError("write failed for '" + path_.string() + "'");
}

void TrajectoryCsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("close failed for '" + path_.string() + "'");
}

}  // namespace axiflow
