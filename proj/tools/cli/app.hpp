#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nhminor/simulator.hpp"
#include "nhminor/test_function.hpp"

namespace nhminor::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_failed = 4 };

// Runs one command line (without the program name). CSV goes to the --out file when given,
// otherwise to `out`; the summary goes to `out` when --out is set and to `log` otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

// "a", "a+bi", "a-bi", "bi", "i".
cplx parse_complex(const std::string& text);

// "CENTER@RADIUS" or "CENTER@RADIUS*AMPLITUDE".
struct BumpSpec {
  cplx center;
  double radius = 0.0;
  cplx amplitude = 1.0;

  static BumpSpec parse(const std::string& text);
  TestFunction make() const;
  // The bump of f(N^a (z - z0)) for this unscaled bump f.
  TestFunction make_scaled(cplx z0, double scale) const;
  std::string str() const;
};

// Shortest decimal form that reads back to the same double.
std::string fmt(double v);

struct MesoSpec {
  double x0 = 0.0;
  cplx z0;
  double a = 0.0;
};

// Level of a mesoscopic statistic: round((x0 + n^{-2a} y) n).
int meso_level(const MesoSpec& m, int n, double y);

struct SimulateConfig {
  int n = 0;
  std::string law = "gaussian";
  int beta = 2;
  int replicas = 0;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  int batches = 16;
  // "LEVEL:BUMP" for macroscopic runs, "Y:BUMP" with an unscaled bump when meso is set.
  std::vector<std::string> stats;
  std::optional<MesoSpec> meso;
  double rel_tol = 0.15;
  bool covariances = true;
  bool cumulants = false;
  double k3_max = 0.2;
  double k4_max = 0.3;
  std::string replicas_out;
  std::string from_replicas;
  std::string config_text;  // embedded in emitted CSV files
};

struct ComparisonRow {
  std::string kind;  // "cov", "k3" or "k4"
  int i = 0;
  int j = 0;
  int level_i = 0;
  int level_j = 0;
  cplx estimate;
  double std_error = 0.0;
  cplx theory;
  double tolerance = 0.0;
  double deviation = 0.0;  // |estimate - theory|, or the standardized cumulant
  double z_score = 0.0;
  bool pass = false;
};

struct SimulateReport {
  std::vector<int> levels;                 // per statistic
  std::vector<std::vector<cplx>> values;   // values[s][r]
  int resampled = 0;
  std::vector<ComparisonRow> rows;
  bool all_pass = true;
};

SimulateReport simulate(const SimulateConfig& cfg);

// Replica CSV: columns replica, level_k, statistic_re, statistic_im; rows of one replica are
// in statistic order.
void write_replicas(std::ostream& os, const SimulateReport& rep, const std::string& config_text);
std::vector<std::vector<cplx>> read_replicas(std::istream& is, const std::vector<int>& levels);

void write_comparison(std::ostream& os, const SimulateReport& rep, const std::string& config_text);

}  // namespace nhminor::cli
