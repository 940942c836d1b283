#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "doctest.h"

#include "hpb/config.hpp"
#include "hpb/output.hpp"
#include "hpb/sweep.hpp"
#include "hpb/validate.hpp"

using namespace hpb;
namespace fs = std::filesystem;

namespace {

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

SweepGrid small_grid() {
  SweepGrid grid;
  grid.x = {AxisParam::Delta, -1.0, 1.0, 5};
  grid.y = Axis{AxisParam::delta, 0.5, 4.0, 4};
  return grid;
}

struct Run {
  int code;
  std::string output;
};

Run hpbsim(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "hpbsim_test_stdout.txt";
  const std::string cmd = std::string(HPBSIM_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, buf.str()};
}

fs::path temp_file(const std::string& name, const std::string& content = "") {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("axis values include both endpoints") {
  const Axis a{AxisParam::Delta, -2.5, 2.5, 101};
  const auto v = a.values();
  REQUIRE(v.size() == 101);
  CHECK(v.front() == -2.5);
  CHECK(v.back() == 2.5);
  CHECK(v[50] == doctest::Approx(0.0).scale(1.0));
  CHECK(a.step() == doctest::Approx(0.05));
}

TEST_CASE("grid validation") {
  SweepGrid g = small_grid();
  CHECK_NOTHROW(g.validate());
  g.x.points = 1;
  CHECK_THROWS_AS(g.validate(), Error);
  g = small_grid();
  g.y->max = INFINITY;
  CHECK_THROWS_AS(g.validate(), Error);
  g = small_grid();
  g.n_cav = 2;
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK(small_grid().size() == 20);
  CHECK(parse_axis_param("K") == AxisParam::K);
  CHECK_THROWS_AS(parse_axis_param("omega"), Error);
}

TEST_CASE("axes are normalized by g1") {
  SystemParams p;
  p.g1 = 10.0;
  CHECK(apply_axis(p, AxisParam::Delta, 0.5, p.g1).Delta == 5.0);
  CHECK(apply_axis(p, AxisParam::delta, -2.0, p.g1).delta == -20.0);
  CHECK(apply_axis(p, AxisParam::K, 1.5, p.g1).g2 == 15.0);
  CHECK(apply_axis(p, AxisParam::eta, 0.02, p.g1).eta == 0.02);
}

TEST_CASE("2x2 grid gives four rows ordered by y then x") {
  SweepGrid g;
  g.x = {AxisParam::Delta, 0.2, 0.4, 2};
  g.y = Axis{AxisParam::delta, 1.0, 2.0, 2};
  const SweepResult r = run_sweep(g, {false, 2});
  REQUIRE(r.rows.size() == 4);
  const double expected[4][2] = {{0.2, 1.0}, {0.4, 1.0}, {0.2, 2.0}, {0.4, 2.0}};
  for (size_t i = 0; i < 4; ++i) {
    CHECK(r.rows[i].x == expected[i][0]);
    CHECK(r.rows[i].y == expected[i][1]);
    CHECK(r.rows[i].params.Delta == doctest::Approx(expected[i][0] * 10.0));
    CHECK(r.rows[i].converged);
    CHECK(r.rows[i].status == "ok");
  }
  CHECK(r.metadata["rows"] == 4);
  CHECK(r.metadata.contains("assumptions"));
}

TEST_CASE("sweep output is identical across thread counts") {
  const SweepGrid g = small_grid();
  const std::string one = csv_of(run_sweep(g, {false, 1}));
  const std::string many = csv_of(run_sweep(g, {false, 8}));
  CHECK(one == many);
  CHECK(one == csv_of(run_sweep(g, {false, 3})));
}

TEST_CASE("every row is reproducible from its parameters") {
  const SweepResult r = run_sweep(small_grid(), {false, 2});
  for (size_t i : {size_t{0}, size_t{7}, size_t{19}}) {
    const PointReport p = run_point(r.rows[i].params, 5);
    CHECK(p.row.mean_photon == r.rows[i].mean_photon);
    CHECK(p.row.g2_zero == r.rows[i].g2_zero);
    CHECK(p.row.pn == r.rows[i].pn);
  }
}

TEST_CASE("undefined and unconverged points are recorded in-row") {
  SweepGrid g;
  g.fixed.eta = 0.0;
  g.x = {AxisParam::Delta, 0.1, 0.2, 2};
  SweepResult r = run_sweep(g);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.kind == "sweep1d");
  CHECK(r.rows[0].status == "g2_undefined");
  CHECK(std::isnan(r.rows[0].y));

  g.fixed.eta = 5.0;
  g.n_cav = 3;
  r = run_sweep(g);
  CHECK(r.rows[0].status == "unconverged");
  CHECK_FALSE(r.rows[0].converged);
  CHECK(std::isnan(r.rows[0].mean_photon));
}

TEST_CASE("CSV format") {
  CHECK(format_number(1.0 / 3.0) == "3.3333333333333331e-01");
  CHECK(format_number(std::nan("")) == "NaN");

  SweepGrid g;
  g.fixed.eta = 0.0;
  g.x = {AxisParam::Delta, 0.1, 0.2, 2};
  const std::string csv = csv_of(run_sweep(g));
  CHECK(csv.rfind("x,y,g1,g2,delta,Delta,eta,gamma,kappa,mean_photon,g2_zero,radiance,"
                  "p0,p1,p2,p3,p4,converged,residual,drift,status\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row.rfind("1.0000000000000001e-01,NaN,", 0) == 0);
  CHECK(row.find(",NaN,NaN,") != std::string::npos);  // g2 and radiance undefined
  const auto columns = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(columns(row) == columns(header));
}

TEST_CASE("JSON output uses null for undefined values") {
  SweepGrid g;
  g.fixed.eta = 0.0;
  g.x = {AxisParam::Delta, 0.1, 0.2, 2};
  const auto j = to_json(run_sweep(g));
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["g2_zero"].is_null());
  CHECK(j["rows"][0]["y"].is_null());
  CHECK(j["metadata"]["tool_version"] == kToolVersion);
}

TEST_CASE("hybrid track rows") {
  SystemParams base;
  const SweepResult r = run_hpb_track({1.0, 2.0}, HpbBranch::Primary, base, 5, {true, 1});
  REQUIRE(r.rows.size() == 2);
  const PointReport p = run_point(hpb_params(base, 1.0, HpbBranch::Primary), 5);
  CHECK(r.rows[0].mean_photon == p.row.mean_photon);
  CHECK(r.rows[0].g2_zero == p.row.g2_zero);
  REQUIRE(r.rows[0].radiance.has_value());
  CHECK(*r.rows[0].radiance == doctest::Approx(*p.row.radiance).epsilon(1e-12));
  CHECK(r.rows[1].params.g2 == doctest::Approx(20.0));

  const SweepResult bad = run_hpb_track({0.5, 1.0}, HpbBranch::Secondary, base, 5);
  CHECK(bad.rows[0].status.rfind("error", 0) == 0);
  CHECK(bad.rows[1].status == "ok");
}

TEST_CASE("point report") {
  SystemParams p;
  p.Delta = std::sqrt(2.0 / 3.0) * 10.0;
  p.delta = 4 * p.Delta;
  const PointReport r = run_point(p, 5);
  REQUIRE(r.row.g2_zero.has_value());
  CHECK(*r.row.g2_zero < 1e-3);
  CHECK(r.row.mean_photon > 1e-3);
  CHECK(r.row.mean_photon < 1e-2);
  REQUIRE(r.row.radiance.has_value());
  CHECK(*r.row.radiance > 1.0);
  CHECK(*r.row.radiance < 6.0);
  CHECK(r.pn[2] < 1e-3 * r.pn[1]);
  REQUIRE(r.spectrum.has_value());
  REQUIRE(r.interference_lines.size() == 3);
  CHECK(r.interference_lines[2].distance < 1e-10);
  const auto j = to_json(r);
  CHECK(j.contains("dressed_spectrum"));
  CHECK(j["truncation"]["compared_with_n_cav"] == 8);

  SystemParams dark;
  dark.eta = 0.0;
  const PointReport v = run_point(dark, 5);
  CHECK(v.row.status == "g2_undefined");
  CHECK(v.pn[0] == doctest::Approx(1.0));
  CHECK_FALSE(v.row.radiance.has_value());
}

TEST_CASE("minimum along delta = 4 Delta sits at the hybrid point") {
  // Grid spacing of the 201-point map.
  const double cell = 5.0 / 200.0;
  double best = INFINITY, best_x = 0.0;
  for (double x = 0.5; x <= 1.2 + 1e-12; x += cell / 2) {
    SystemParams p;
    p.Delta = x * p.g1;
    p.delta = 4 * p.Delta;
    const SweepRow r = evaluate_row(p, 5, false);
    if (r.g2_zero && *r.g2_zero < best) {
      best = *r.g2_zero;
      best_x = x;
    }
  }
  CHECK(std::abs(best_x - std::sqrt(2.0 / 3.0)) <= cell);
}

TEST_CASE("spectrum rows") {
  SystemParams p;
  const auto rows = run_spectrum(p, {AxisParam::delta, -1.0, 1.0, 3});
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].spectrum.single_excitation[2] == doctest::Approx(std::sqrt(2.0) * 10.0));
  CHECK(rows[2].spectrum.delta == doctest::Approx(10.0));
  std::ostringstream out;
  write_spectrum_csv(rows, out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("config merging") {
  RunConfig c;
  merge_yaml(c,
             "g1: 5\n"
             "eta: 0.02\n"
             "gamma2: 0.5\n"
             "n_cav: 6\n"
             "format: json\n"
             "x_axis: {param: delta, min: -1, max: 1, points: 11}\n"
             "hpb_track: {branch: secondary, K: [1, 2]}\n"
             "spectrum: {points: 9}\n");
  CHECK(c.params.g1 == 5.0);
  CHECK(c.params.g2 == 10.0);
  CHECK(c.params.eta == 0.02);
  CHECK(c.params.gamma2 == 0.5);
  CHECK(c.n_cav == 6);
  CHECK(c.format == "json");
  CHECK(c.x_axis.param == AxisParam::delta);
  CHECK(c.x_axis.points == 11);
  CHECK(c.branch == HpbBranch::Secondary);
  CHECK(c.K_values == std::vector<double>{1.0, 2.0});
  CHECK(c.spectrum_axis.points == 9);
  CHECK(to_json(c)["gamma2"] == 0.5);

  RunConfig d;
  merge_yaml(d, "");
  CHECK(d.params.g1 == 10.0);
}

TEST_CASE("config errors") {
  RunConfig c;
  auto kind_of = [&](const std::string& yaml) {
    try {
      merge_yaml(c, yaml);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Domain;
  };
  CHECK(kind_of("g3: 1\n") == ErrorKind::Config);
  CHECK(kind_of("g1: ten\n") == ErrorKind::Config);
  CHECK(kind_of("x_axis: {param: omega}\n") == ErrorKind::Config);
  CHECK(kind_of("x_axis: {step: 2}\n") == ErrorKind::Config);
  CHECK(kind_of("hpb_track: {branch: tertiary}\n") == ErrorKind::Config);
  CHECK(kind_of("[1, 2]\n") == ErrorKind::Config);
  CHECK(kind_of("g1: [\n") == ErrorKind::Config);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.yaml"), Error);
}

TEST_CASE("validation grid and block oracle") {
  SystemParams base;
  CHECK(solver_validation_grid(base).size() >= 10);
  SystemParams p;
  p.delta = 5.0;
  const auto b1 = excitation_block_eigenvalues(p, 1);
  REQUIRE(b1.size() == 3);
  CHECK(std::abs(b1[0] - single_excitation_roots(p)[0]) < 1e-9);
  CHECK_THROWS_AS(excitation_block_eigenvalues(p, 3), Error);
}

TEST_CASE("cli: point and exit codes") {
  Run r = hpbsim("point --eta 0 --format json");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"g2_zero\": null") != std::string::npos);

  CHECK(hpbsim("point --bogus").code == 1);
  CHECK(hpbsim("").code == 1);
  CHECK(hpbsim("point --format xml").code == 1);
  CHECK(hpbsim("point --config /nonexistent.yaml").code == 1);
  CHECK(hpbsim("point --gamma -1").code == 1);
  CHECK(hpbsim("hpb-track --branch secondary --K 0.5 --format json").code == 0);
}

TEST_CASE("cli: flags override the config file and the merge is echoed") {
  const fs::path cfg = temp_file("hpbsim_test.yaml",
                                 "g1: 5\ng2: 5\neta: 0.05\n"
                                 "x_axis: {min: 0.2, max: 0.6, points: 3}\n"
                                 "y_axis: {min: 1, max: 2, points: 2}\n");
  const fs::path out = fs::temp_directory_path() / "hpbsim_test_sweep.csv";
  fs::remove(out);
  fs::remove(out.string() + ".meta.json");
  const Run r = hpbsim("sweep2d --config " + cfg.string() + " --g1 7 --threads 2 --out " +
                       out.string());
  CHECK(r.code == 0);
  std::ifstream csv(out);
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 7);

  std::ifstream meta_in(out.string() + ".meta.json");
  REQUIRE(meta_in.good());
  const auto meta = nlohmann::json::parse(meta_in);
  CHECK(meta["config"]["g1"] == 7.0);
  CHECK(meta["config"]["g2"] == 5.0);
  CHECK(meta["config"]["eta"] == 0.05);
  CHECK(meta["config"]["x_axis"]["points"] == 3);
}

TEST_CASE("cli: spectrum and hybrid track") {
  Run r = hpbsim("spectrum --points 5");
  CHECK(r.code == 0);
  CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 6);
  r = hpbsim("hpb-track --K 1 1.5 --format json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j["rows"].size() == 2);
  CHECK(j["metadata"]["config"]["hpb_track"]["K"].size() == 2);
  CHECK_FALSE(j["rows"][0]["radiance"].is_null());
}

TEST_CASE("cli: validate negative control names the residual check") {
  const Run r = hpbsim("validate --corrupt-liouvillian-sign");
  CHECK(r.code == 3);
  std::istringstream lines(r.output);
  std::string line;
  bool residual_failed = false;
  int records = 0;
  while (std::getline(lines, line)) {
    const auto rec = nlohmann::json::parse(line);
    ++records;
    if (rec["check"] == "residual") residual_failed = rec["passed"] == false;
  }
  CHECK(records == 7);
  CHECK(residual_failed);
}

TEST_CASE("cli: validate passes on the default build") {
  const Run r = hpbsim("validate");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"passed\":false") == std::string::npos);
}
