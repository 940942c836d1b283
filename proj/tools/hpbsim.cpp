// hpbsim: steady-state photon statistics of a driven two-qubit cavity.
//
//   hpbsim point     --Delta 8.165 --delta 32.66
//   hpbsim sweep2d   --config sweep.yaml --out map.csv --threads 4
//   hpbsim hpb-track --branch secondary --K 1 1.5 2 --format json
//   hpbsim spectrum  --g1 10 --g2 10
//   hpbsim validate

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "hpb/config.hpp"
#include "hpb/output.hpp"
#include "hpb/validate.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kValidation = 3 };

struct Flags {
  std::string config_path;
  std::string out_path;
  std::string format;
  int threads = 0;
  int n_cav = 0;
  int points = 0;
  double g1 = 0, g2 = 0, delta = 0, Delta = 0, eta = 0, gamma = 0;
  std::vector<double> K;
  std::string branch;
  bool radiance = false;
  bool corrupt_sign = false;

  std::map<std::string, CLI::Option*> opts;

  bool given(const std::string& name) const {
    const auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* cmd, Flags& f) {
  f.opts["config"] = cmd->add_option("--config", f.config_path, "YAML config file");
  f.opts["out"] = cmd->add_option("--out", f.out_path, "output file (default stdout)");
  f.opts["format"] = cmd->add_option("--format", f.format, "csv or json")
                         ->check(CLI::IsMember({"csv", "json"}));
  f.opts["threads"] = cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)")
                          ->check(CLI::NonNegativeNumber);
  f.opts["ncav"] = cmd->add_option("--ncav", f.n_cav, "cavity Fock truncation");
  f.opts["g1"] = cmd->add_option("--g1", f.g1, "qubit 1 coupling / kappa");
  f.opts["g2"] = cmd->add_option("--g2", f.g2, "qubit 2 coupling / kappa");
  f.opts["delta"] = cmd->add_option("--delta", f.delta, "qubit-qubit detuning / kappa");
  f.opts["Delta"] = cmd->add_option("--Delta", f.Delta, "drive detuning / kappa");
  f.opts["eta"] = cmd->add_option("--eta", f.eta, "drive strength / kappa");
  f.opts["gamma"] = cmd->add_option("--gamma", f.gamma, "qubit decay / kappa");
  f.opts["K"] = cmd->add_option("--K", f.K, "g2/g1; a list for hpb-track");
  f.opts["branch"] = cmd->add_option("--branch", f.branch, "primary or secondary")
                         ->check(CLI::IsMember({"primary", "secondary"}));
}

hpb::RunConfig merged_config(const Flags& f, const std::string& command) {
  hpb::RunConfig c = f.config_path.empty() ? hpb::RunConfig{} : hpb::load_config_file(f.config_path);
  auto& p = c.params;
  if (f.given("g1")) p.g1 = f.g1;
  if (f.given("g2")) p.g2 = f.g2;
  if (f.given("delta")) p.delta = f.delta;
  if (f.given("Delta")) p.Delta = f.Delta;
  if (f.given("eta")) p.eta = f.eta;
  if (f.given("gamma")) p.gamma = f.gamma;
  if (f.given("format")) c.format = f.format;
  if (f.given("threads")) c.threads = f.threads;
  if (f.given("ncav")) c.n_cav = f.n_cav;
  if (f.given("branch")) c.branch = hpb::parse_branch(f.branch);
  if (f.given("radiance")) c.radiance = true;
  if (f.given("points")) {
    c.x_axis.points = f.points;
    c.y_axis.points = f.points;
    c.spectrum_axis.points = f.points;
  }
  if (f.given("K")) {
    if (command == "hpb-track") {
      c.K_values = f.K;
    } else if (f.K.size() == 1) {
      p.g2 = f.K.front() * p.g1;
    } else {
      throw hpb::Error(hpb::ErrorKind::Config, "--K takes a single value outside hpb-track");
    }
  }
  if (c.format != "csv" && c.format != "json") {
    throw hpb::Error(hpb::ErrorKind::Config, "format must be csv or json, got '" + c.format + "'");
  }
  p.validate();
  return c;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw hpb::Error(hpb::ErrorKind::Config, "cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  // CSV carries no metadata; with --out it goes to a sidecar file.
  void sidecar(const nlohmann::json& metadata) const {
    if (path_.empty()) return;
    std::ofstream meta(path_ + ".meta.json", std::ios::binary);
    meta << metadata.dump(2) << '\n';
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

void emit(const hpb::SweepResult& result, const hpb::RunConfig& c, Output& out) {
  if (c.format == "json") {
    out.stream() << hpb::to_json(result).dump(2) << '\n';
  } else {
    hpb::write_csv(result, out.stream());
    out.sidecar(result.metadata);
  }
}

int run_command(const std::string& command, const Flags& f) {
  if (command == "validate") {
    hpb::ValidationOptions options;
    if (!f.config_path.empty()) options.base = hpb::load_config_file(f.config_path).params;
    if (f.given("ncav")) options.n_cav = f.n_cav;
    options.solver.corrupt_commutator_sign = f.corrupt_sign;
    Output out(f.out_path);
    bool all = true;
    for (const auto& rec : hpb::run_validation(options)) {
      out.stream() << hpb::to_json(rec).dump() << '\n';
      all = all && rec.passed;
    }
    return all ? kOk : kValidation;
  }

  const hpb::RunConfig c = merged_config(f, command);
  Output out(f.out_path);
  hpb::SweepOptions options{c.radiance, c.threads};

  if (command == "point") {
    const auto report = hpb::run_point(c.params, c.n_cav);
    if (c.format == "json") {
      auto j = hpb::to_json(report);
      j["config"] = hpb::to_json(c);
      out.stream() << j.dump(2) << '\n';
    } else {
      hpb::SweepResult single{"point", {report.row}, {{"config", hpb::to_json(c)}}};
      hpb::write_csv(single, out.stream());
      out.sidecar(single.metadata);
    }
    return report.row.status.rfind("error", 0) == 0 ? kNumerical : kOk;
  }
  if (command == "sweep2d") {
    hpb::SweepGrid grid{c.x_axis, c.y_axis, c.params, c.n_cav};
    auto result = hpb::run_sweep(grid, options);
    result.metadata["config"] = hpb::to_json(c);
    emit(result, c, out);
    return kOk;
  }
  if (command == "hpb-track") {
    options.radiance = true;
    auto result = hpb::run_hpb_track(c.K_values, c.branch, c.params, c.n_cav, options);
    result.metadata["config"] = hpb::to_json(c);
    emit(result, c, out);
    return kOk;
  }
  if (command == "spectrum") {
    const auto rows = hpb::run_spectrum(c.params, c.spectrum_axis);
    if (c.format == "json") {
      out.stream() << nlohmann::json{{"metadata", {{"config", hpb::to_json(c)},
                                                   {"tool_version", hpb::kToolVersion}}},
                                     {"rows", hpb::to_json(rows)}}
                          .dump(2)
                   << '\n';
    } else {
      hpb::write_spectrum_csv(rows, out.stream());
    }
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state photon statistics of a driven two-qubit cavity"};
  app.require_subcommand(1);
  // One flag set per subcommand; std::map keeps the bound addresses stable.
  std::map<std::string, Flags> per_command;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"point", "single-point report"},
      {"sweep2d", "two-dimensional (Delta, delta) map"},
      {"hpb-track", "observables along a hybrid-blockade trajectory"},
      {"spectrum", "dressed-state energies versus delta"},
      {"validate", "run the built-in oracle checks"}};
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    Flags& flags = per_command[name];
    add_common(cmd, flags);
    if (name == "sweep2d" || name == "spectrum") {
      flags.opts["points"] = cmd->add_option("--points", flags.points, "points per axis")
                                 ->check(CLI::Range(2, 100000));
    }
    if (name == "sweep2d") {
      flags.opts["radiance"] = cmd->add_flag("--radiance", flags.radiance, "also compute R");
    }
    if (name == "validate") {
      cmd->add_flag("--corrupt-liouvillian-sign", flags.corrupt_sign)->group("");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    return run_command(name, per_command.at(name));
  } catch (const hpb::Error& e) {
    std::cerr << "hpbsim: " << hpb::to_string(e.kind()) << " error: " << e.what() << '\n';
    return e.is_numerical() ? kNumerical : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hpbsim: " << e.what() << '\n';
    return kNumerical;
  }
}
