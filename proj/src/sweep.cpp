#include "hpb/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace hpb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json params_json(const SystemParams& p) {
  nlohmann::json j = {{"g1", p.g1},       {"g2", p.g2},       {"delta", p.delta},
                      {"Delta", p.Delta}, {"eta", p.eta},     {"kappa", p.kappa},
                      {"gamma", p.gamma}, {"drive_phase", p.drive_phase}};
  if (p.gamma2) j["gamma2"] = *p.gamma2;
  return j;
}

nlohmann::json axis_json(const Axis& a) {
  return {{"param", to_string(a.param)}, {"min", a.min}, {"max", a.max}, {"points", a.points}};
}

// Runs task(i) for i in [0, count) on a pool; results go to caller-owned slots.
template <typename Task>
void parallel_for(size_t count, int threads, Task task) {
  const size_t workers = std::min<size_t>(static_cast<size_t>(resolve_threads(threads)),
                                          std::max<size_t>(count, 1));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) task(i);
    });
  }
}

nlohmann::json common_metadata(int n_cav, int threads, double seconds) {
  return {{"tool", "hpbsim"},
          {"tool_version", kToolVersion},
          {"n_cav", n_cav},
          {"truncation_check_n_cav", n_cav + 3},
          {"truncation_tolerance", kTruncationTolerance},
          {"threads", resolve_threads(threads)},
          {"wall_clock_seconds", seconds},
          {"assumptions",
           {"qubit decay gamma defaults to kappa; the reproduced figures do not state it",
            "Delta and delta axes are in units of g1, eta in units of kappa"}}};
}

}  // namespace

const char* to_string(AxisParam param) {
  switch (param) {
    case AxisParam::Delta: return "Delta";
    case AxisParam::delta: return "delta";
    case AxisParam::K: return "K";
    case AxisParam::eta: return "eta";
  }
  return "unknown";
}

AxisParam parse_axis_param(const std::string& name) {
  if (name == "Delta") return AxisParam::Delta;
  if (name == "delta") return AxisParam::delta;
  if (name == "K") return AxisParam::K;
  if (name == "eta") return AxisParam::eta;
  throw Error(ErrorKind::Config,
              "unknown sweep axis '" + name + "' (expected Delta, delta, K or eta)");
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) {
    // Endpoint-exact spacing without accumulated error.
    v[static_cast<size_t>(i)] =
        i == points - 1 ? max : min + (max - min) * static_cast<double>(i) / (points - 1);
  }
  return v;
}

void SweepGrid::validate() const {
  auto check = [](const Axis& a, const char* which) {
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw Error(ErrorKind::Config, std::string(which) + " range must be finite");
    }
    if (a.points < 2) {
      throw Error(ErrorKind::Config, std::string(which) + " needs at least 2 points");
    }
  };
  check(x, "x axis");
  if (y) check(*y, "y axis");
  fixed.validate();
  HilbertConfig{n_cav, 2}.validate();
}

size_t SweepGrid::size() const {
  return static_cast<size_t>(x.points) * static_cast<size_t>(y ? y->points : 1);
}

SystemParams apply_axis(SystemParams p, AxisParam param, double value, double g1) {
  switch (param) {
    case AxisParam::Delta: p.Delta = value * g1; break;
    case AxisParam::delta: p.delta = value * g1; break;
    case AxisParam::K: p.g2 = value * g1; break;
    case AxisParam::eta: p.eta = value; break;
  }
  return p;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepRow evaluate_row(const SystemParams& params, int n_cav, bool radiance) {
  SweepRow row;
  row.params = params;
  row.y = kNaN;
  row.mean_photon = kNaN;
  row.pn.fill(kNaN);
  try {
    const HilbertConfig config = config_for(ModelVariant::TwoQubit, n_cav);
    const CheckedSolution sol = solve_checked(params, ModelVariant::TwoQubit, config);
    row.residual = sol.rho.residual;
    row.drift = sol.truncation.drift;
    row.converged = sol.truncation.converged;
    if (!row.converged) {
      row.status = "unconverged";
      return row;
    }
    row.mean_photon = sol.obs.mean_photon;
    row.g2_zero = sol.obs.g2_zero;
    for (size_t k = 0; k < kReportedFockStates; ++k) {
      row.pn[k] = k < sol.obs.pn.size() ? sol.obs.pn[k] : 0.0;
    }
    row.status = row.g2_zero ? "ok" : "g2_undefined";
    if (radiance) row.radiance = radiance_witness(params, config);
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options) {
  grid.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto xs = grid.x.values();
  const auto ys = grid.y ? grid.y->values() : std::vector<double>{kNaN};
  const double g1 = grid.fixed.g1;

  SweepResult result;
  result.kind = grid.y ? "sweep2d" : "sweep1d";
  result.rows.resize(grid.size());
  parallel_for(result.rows.size(), options.threads, [&](size_t i) {
    const size_t ix = i % xs.size();
    const size_t iy = i / xs.size();
    SystemParams p = apply_axis(grid.fixed, grid.x.param, xs[ix], g1);
    if (grid.y) p = apply_axis(p, grid.y->param, ys[iy], g1);
    SweepRow row = evaluate_row(p, grid.n_cav, options.radiance);
    row.x = xs[ix];
    row.y = ys[iy];
    result.rows[i] = std::move(row);
  });

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.metadata = common_metadata(grid.n_cav, options.threads, seconds);
  result.metadata["kind"] = result.kind;
  result.metadata["fixed"] = params_json(grid.fixed);
  result.metadata["x_axis"] = axis_json(grid.x);
  if (grid.y) result.metadata["y_axis"] = axis_json(*grid.y);
  result.metadata["radiance"] = options.radiance;
  result.metadata["rows"] = result.rows.size();
  return result;
}

SweepResult run_hpb_track(const std::vector<double>& K_values, HpbBranch branch,
                          const SystemParams& base, int n_cav, const SweepOptions& options) {
  base.validate();
  if (K_values.empty()) throw Error(ErrorKind::Config, "hpb track needs at least one K");
  const auto start = std::chrono::steady_clock::now();

  SweepResult result;
  result.kind = "hpb-track";
  result.rows.resize(K_values.size());
  parallel_for(K_values.size(), options.threads, [&](size_t i) {
    const double K = K_values[i];
    SweepRow row;
    try {
      row = evaluate_row(hpb_params(base, K, branch), n_cav, options.radiance);
    } catch (const Error& e) {
      row.params = base;
      row.mean_photon = kNaN;
      row.pn.fill(kNaN);
      row.status = std::string("error: ") + e.what();
    }
    row.x = K;
    row.y = kNaN;
    result.rows[i] = std::move(row);
  });

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.metadata = common_metadata(n_cav, options.threads, seconds);
  result.metadata["kind"] = result.kind;
  result.metadata["branch"] = to_string(branch);
  result.metadata["fixed"] = params_json(base);
  result.metadata["K_values"] = K_values;
  result.metadata["radiance"] = options.radiance;
  result.metadata["rows"] = result.rows.size();
  return result;
}

PointReport run_point(const SystemParams& params, int n_cav) {
  params.validate();
  PointReport report;
  report.params = params;
  report.n_cav = n_cav;

  const HilbertConfig config = config_for(ModelVariant::TwoQubit, n_cav);
  const CheckedSolution sol = solve_checked(params, ModelVariant::TwoQubit, config);
  report.pn = sol.obs.pn;
  report.min_eigenvalue = sol.rho.min_eigenvalue;

  SweepRow& row = report.row;
  row.params = params;
  row.x = kNaN;
  row.y = kNaN;
  row.mean_photon = sol.obs.mean_photon;
  row.g2_zero = sol.obs.g2_zero;
  for (size_t k = 0; k < kReportedFockStates; ++k) {
    row.pn[k] = k < sol.obs.pn.size() ? sol.obs.pn[k] : 0.0;
  }
  row.converged = sol.truncation.converged;
  row.residual = sol.rho.residual;
  row.drift = sol.truncation.drift;
  row.status = !row.converged ? "unconverged" : row.g2_zero ? "ok" : "g2_undefined";
  if (params.eta > 0.0) {
    try {
      row.radiance = radiance_witness(params, config);
    } catch (const Error&) {
      // Undefined witness stays unset.
    }
  }

  try {
    report.spectrum = dressed_spectrum(params);
  } catch (const Error&) {
  }
  for (int k : {2, 3, 4}) {
    const double target = k * params.Delta;
    report.interference_lines.push_back({"delta = " + std::to_string(k) + " Delta", target,
                                         std::abs(params.delta - target)});
  }
  report.nearest_condition = nearest_analytic_condition(params);
  return report;
}

std::vector<SpectrumRow> run_spectrum(const SystemParams& params, const Axis& delta_axis) {
  if (delta_axis.points < 2) throw Error(ErrorKind::Config, "spectrum needs at least 2 points");
  std::vector<SpectrumRow> rows;
  for (double d : delta_axis.values()) {
    SystemParams p = params;
    p.delta = d * params.g1;
    rows.push_back({d, dressed_spectrum(p)});
  }
  return rows;
}

}  // namespace hpb
