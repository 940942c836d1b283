#include "hpb/output.hpp"

#include <cmath>
#include <cstdio>

namespace hpb {

std::string format_number(double value) {
  if (std::isnan(value)) return "NaN";
  if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) {
  return v ? format_number(*v) : "NaN";
}

nlohmann::json opt_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::json num_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// Status strings may carry error messages; keep the CSV one field per column.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

nlohmann::json row_json(const SweepRow& r) {
  nlohmann::json pn = nlohmann::json::array();
  for (double p : r.pn) pn.push_back(num_json(p));
  return {{"x", num_json(r.x)},
          {"y", num_json(r.y)},
          {"g1", r.params.g1},
          {"g2", r.params.g2},
          {"delta", r.params.delta},
          {"Delta", r.params.Delta},
          {"eta", r.params.eta},
          {"gamma", r.params.gamma},
          {"kappa", r.params.kappa},
          {"mean_photon", num_json(r.mean_photon)},
          {"g2_zero", opt_json(r.g2_zero)},
          {"radiance", opt_json(r.radiance)},
          {"pn", pn},
          {"converged", r.converged},
          {"residual", r.residual},
          {"drift", num_json(r.drift)},
          {"status", r.status}};
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "x,y,g1,g2,delta,Delta,eta,gamma,kappa,mean_photon,g2_zero,radiance";
  for (size_t k = 0; k < kReportedFockStates; ++k) out << ",p" << k;
  out << ",converged,residual,drift,status\n";
  for (const auto& r : result.rows) {
    out << format_number(r.x) << ',' << format_number(r.y) << ','
        << format_number(r.params.g1) << ',' << format_number(r.params.g2) << ','
        << format_number(r.params.delta) << ',' << format_number(r.params.Delta) << ','
        << format_number(r.params.eta) << ',' << format_number(r.params.gamma) << ','
        << format_number(r.params.kappa) << ',' << format_number(r.mean_photon) << ','
        << opt(r.g2_zero) << ',' << opt(r.radiance);
    for (double p : r.pn) out << ',' << format_number(p);
    out << ',' << (r.converged ? "true" : "false") << ',' << format_number(r.residual) << ','
        << format_number(r.drift) << ',' << csv_field(r.status) << '\n';
  }
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) rows.push_back(row_json(r));
  return {{"metadata", result.metadata}, {"rows", rows}};
}

nlohmann::json to_json(const PointReport& report) {
  nlohmann::json j;
  j["params"] = row_json(report.row);
  j["n_cav"] = report.n_cav;
  j["pn"] = report.pn;
  j["min_eigenvalue"] = report.min_eigenvalue;
  if (report.spectrum) {
    j["dressed_spectrum"] = {{"single_excitation", report.spectrum->single_excitation},
                             {"two_excitation", report.spectrum->two_excitation}};
  }
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : report.interference_lines) {
    lines.push_back({{"line", l.name}, {"delta_on_line", l.delta_target}, {"distance", l.distance}});
  }
  j["interference_lines"] = lines;
  j["nearest_condition"] = report.nearest_condition;
  j["truncation"] = {{"converged", report.row.converged},
                     {"drift", num_json(report.row.drift)},
                     {"n_cav", report.n_cav},
                     {"compared_with_n_cav", report.n_cav + 3}};
  j["tool_version"] = kToolVersion;
  return j;
}

void write_spectrum_csv(const std::vector<SpectrumRow>& rows, std::ostream& out) {
  out << "delta_over_g1,eps1_0,eps1_1,eps1_2,eps2_0,eps2_1,eps2_2,eps2_3\n";
  for (const auto& r : rows) {
    out << format_number(r.delta_over_g1);
    for (double e : r.spectrum.single_excitation) out << ',' << format_number(e);
    for (double e : r.spectrum.two_excitation) out << ',' << format_number(e);
    out << '\n';
  }
}

nlohmann::json to_json(const std::vector<SpectrumRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"delta_over_g1", r.delta_over_g1},
                   {"delta", r.spectrum.delta},
                   {"single_excitation", r.spectrum.single_excitation},
                   {"two_excitation", r.spectrum.two_excitation}});
  }
  return out;
}

}  // namespace hpb
