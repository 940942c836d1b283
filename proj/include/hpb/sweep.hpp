#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hpb/analytics.hpp"
#include "hpb/solver.hpp"

namespace hpb {

// Sweep axis parameters. Delta and delta are given in units of g1, K is the
// coupling ratio g2 / g1 and eta is in units of kappa.
enum class AxisParam { Delta, delta, K, eta };

const char* to_string(AxisParam param);
AxisParam parse_axis_param(const std::string& name);

struct Axis {
  AxisParam param = AxisParam::Delta;
  double min = 0.0;
  double max = 1.0;
  int points = 2;

  // Evenly spaced, endpoints included.
  std::vector<double> values() const;
  double step() const { return (max - min) / (points - 1); }
};

struct SweepGrid {
  Axis x;
  std::optional<Axis> y;
  SystemParams fixed;
  int n_cav = 5;

  void validate() const;
  size_t size() const;
};

// Parameters of the point at normalized axis coordinate(s) (x, y).
SystemParams apply_axis(SystemParams params, AxisParam param, double value, double g1);

struct SweepOptions {
  bool radiance = false;
  // 0 selects std::thread::hardware_concurrency().
  int threads = 0;
};

inline constexpr size_t kReportedFockStates = 5;

struct SweepRow {
  double x = 0.0;
  double y = 0.0;  // NaN for one-dimensional sweeps
  SystemParams params;
  double mean_photon = 0.0;
  std::optional<double> g2_zero;
  std::optional<double> radiance;
  std::array<double, kReportedFockStates> pn{};
  bool converged = false;
  double residual = 0.0;
  double drift = 0.0;
  // "ok", "g2_undefined", "unconverged" or "error: <message>".
  std::string status = "ok";
};

struct SweepResult {
  std::string kind;  // "sweep2d", "sweep1d" or "hpb-track"
  std::vector<SweepRow> rows;
  nlohmann::json metadata;
};

// Rows ordered by (y index, x index) regardless of thread count.
SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

// One row per K at hpb_trajectory(K, branch) with g2 = K g1.
SweepResult run_hpb_track(const std::vector<double>& K_values, HpbBranch branch,
                          const SystemParams& base, int n_cav,
                          const SweepOptions& options = {});

// Evaluates one point; failures are recorded in the row, never thrown.
SweepRow evaluate_row(const SystemParams& params, int n_cav, bool radiance);

struct ConditionDistance {
  std::string name;
  double delta_target;  // delta on the line at the point's Delta
  double distance;      // |delta - delta_target|
};

struct PointReport {
  SystemParams params;
  int n_cav = 5;
  SweepRow row;
  std::vector<double> pn;  // full distribution at n_cav
  double min_eigenvalue = 0.0;
  std::optional<DressedSpectrum> spectrum;
  std::vector<ConditionDistance> interference_lines;
  std::string nearest_condition;
};

PointReport run_point(const SystemParams& params, int n_cav);

// Dressed roots versus delta (delta axis in units of g1).
struct SpectrumRow {
  double delta_over_g1;
  DressedSpectrum spectrum;
};
std::vector<SpectrumRow> run_spectrum(const SystemParams& params, const Axis& delta_axis);

int resolve_threads(int requested);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace hpb
