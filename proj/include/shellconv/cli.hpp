#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace shellconv::cli {

/// Bad flags or configuration values; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

struct PhysicalSection {
  double prandtl = 1.0;
  double r = 0.63661977236758134;  // 2/pi
  std::optional<double> lambda;    ///< absent: lambda_factor * lambda_c
  double lambda_factor = 1.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
};

struct SpectrumSection {
  int l_max = 4;
  int n_max = 3;
};

struct CriticalSection {
  int l_scan = -1;  ///< -1: 10*ceil(r) + 20
};

struct ReduceSection {
  std::optional<int> l_c;  ///< absent: the critical degree at r
  int grid_l_max = -1;     ///< -1: 3*l_c + 2
  int n_z = 17;
  std::string inner = "l2";
};

struct EvolveSection {
  std::optional<double> t_end;  ///< absent: 20/|beta+|
  double output_dt = 0.1;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::optional<std::vector<double>> initial;  ///< real chart (x0, y1, z1, ...)
  double initial_scale = 1e-2;  ///< random start at this fraction of the attractor radius
  int samples = 64;
  bool full_cubic = false;
  bool reconstruct = false;
  std::string grid_format = "json";
  int grid_n_z = 9;
};

struct FrictionSection {
  double a = 6.4e6;
  double h = 1e4;
  int l_c = 6;
  double sigma0 = 1e6;
};

struct RunConfig {
  PhysicalSection physical;
  SpectrumSection spectrum;
  CriticalSection critical;
  ReduceSection reduce;
  EvolveSection evolve;
  FrictionSection friction;
  std::uint64_t seed = 0;
};

/// Parses a config document; missing keys take defaults, unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc);
/// Every field, defaults included.
nlohmann::json to_json(const RunConfig& cfg);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shellconv::cli
