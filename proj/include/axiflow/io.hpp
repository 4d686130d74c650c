#pragma once

// File formats:
//   physical profile  CSV, header "x,v,u"
//   transplanted      JSON {"c", "d", "n", "values": [...]}
//   trajectory        CSV, header "t,a,b,c,d,area,min_h,h2_0,h2_pi"
//   event report      JSON {"kind", "t_event", "theta_star", "diagnostics"}
//   spectrum report   JSON {"eigenvalues": [{"re", "im"}], "max_real_part",
//                           "kernel_residual", "resolvent": [{"lambda", "kappa"}]}
// Doubles are written in shortest round-trip form.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "axiflow/linearization.hpp"
#include "axiflow/profile.hpp"
#include "axiflow/stepper.hpp"

namespace axiflow {

/// Thrown for unreadable or malformed input files and unwritable outputs.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double x);

void write_physical_csv(std::ostream& os, const PhysicalProfile& p);
void write_physical_csv(const std::filesystem::path& path, const PhysicalProfile& p);
PhysicalProfile read_physical_csv(std::istream& is, const std::string& origin = "<stream>");
PhysicalProfile read_physical_csv(const std::filesystem::path& path);

nlohmann::json to_json(const HProfile& h);
HProfile hprofile_from_json(const nlohmann::json& j);
void write_hprofile_json(const std::filesystem::path& path, const HProfile& h);
HProfile read_hprofile_json(const std::filesystem::path& path);

nlohmann::json to_json(const SingularityReport& r);
nlohmann::json to_json(const SpectrumReport& r);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

inline constexpr const char* kTrajectoryHeader = "t,a,b,c,d,area,min_h,h2_0,h2_pi";
std::string trajectory_csv_row(const StepScalars& s);

/// Streams trajectory rows as they are produced.
class TrajectoryCsvWriter {
 public:
  explicit TrajectoryCsvWriter(const std::filesystem::path& path);
  void write(const StepScalars& s);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace axiflow
