#include "hpb/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hpb {

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorKind::Config, "config key '" + key + "' has an invalid value");
  }
}

void require_known(const YAML::Node& map, const std::set<std::string>& known,
                   const std::string& where) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) {
      throw Error(ErrorKind::Config, "unknown config key '" + key + "' in " + where);
    }
  }
}

void merge_axis(Axis& axis, const YAML::Node& node, const std::string& name) {
  if (!node.IsMap()) throw Error(ErrorKind::Config, "'" + name + "' must be a mapping");
  require_known(node, {"param", "min", "max", "points"}, name);
  if (node["param"]) axis.param = parse_axis_param(scalar<std::string>(node["param"], name));
  if (node["min"]) axis.min = scalar<double>(node["min"], name + ".min");
  if (node["max"]) axis.max = scalar<double>(node["max"], name + ".max");
  if (node["points"]) axis.points = scalar<int>(node["points"], name + ".points");
}

}  // namespace

HpbBranch parse_branch(const std::string& name) {
  if (name == "primary") return HpbBranch::Primary;
  if (name == "secondary") return HpbBranch::Secondary;
  throw Error(ErrorKind::Config, "branch must be 'primary' or 'secondary', got '" + name + "'");
}

void merge_yaml(RunConfig& config, const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid YAML: ") + e.what());
  }
  if (root.IsNull()) return;
  if (!root.IsMap()) throw Error(ErrorKind::Config, "config must be a key-value mapping");
  require_known(root,
                {"g1", "g2", "delta", "Delta", "eta", "kappa", "gamma", "gamma2", "drive_phase",
                 "n_cav", "threads", "format", "radiance", "x_axis", "y_axis", "hpb_track",
                 "spectrum"},
                "top level");

  SystemParams& p = config.params;
  auto number = [&](const char* key, double& target) {
    if (root[key]) target = scalar<double>(root[key], key);
  };
  number("g1", p.g1);
  number("g2", p.g2);
  number("delta", p.delta);
  number("Delta", p.Delta);
  number("eta", p.eta);
  number("kappa", p.kappa);
  number("gamma", p.gamma);
  number("drive_phase", p.drive_phase);
  if (root["gamma2"]) p.gamma2 = scalar<double>(root["gamma2"], "gamma2");
  if (root["n_cav"]) config.n_cav = scalar<int>(root["n_cav"], "n_cav");
  if (root["threads"]) config.threads = scalar<int>(root["threads"], "threads");
  if (root["format"]) config.format = scalar<std::string>(root["format"], "format");
  if (root["radiance"]) config.radiance = scalar<bool>(root["radiance"], "radiance");
  if (root["x_axis"]) merge_axis(config.x_axis, root["x_axis"], "x_axis");
  if (root["y_axis"]) merge_axis(config.y_axis, root["y_axis"], "y_axis");
  if (root["spectrum"]) {
    const YAML::Node s = root["spectrum"];
    if (!s.IsMap()) throw Error(ErrorKind::Config, "'spectrum' must be a mapping");
    require_known(s, {"min", "max", "points"}, "spectrum");
    merge_axis(config.spectrum_axis, s, "spectrum");
  }
  if (root["hpb_track"]) {
    const YAML::Node t = root["hpb_track"];
    if (!t.IsMap()) throw Error(ErrorKind::Config, "'hpb_track' must be a mapping");
    require_known(t, {"branch", "K"}, "hpb_track");
    if (t["branch"]) config.branch = parse_branch(scalar<std::string>(t["branch"], "branch"));
    if (t["K"]) {
      if (!t["K"].IsSequence()) throw Error(ErrorKind::Config, "hpb_track.K must be a list");
      config.K_values.clear();
      for (const auto& k : t["K"]) config.K_values.push_back(scalar<double>(k, "hpb_track.K"));
    }
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  RunConfig config;
  merge_yaml(config, buffer.str());
  return config;
}

nlohmann::json to_json(const RunConfig& c) {
  auto axis = [](const Axis& a) {
    return nlohmann::json{{"param", to_string(a.param)},
                          {"min", a.min},
                          {"max", a.max},
                          {"points", a.points}};
  };
  nlohmann::json j = {{"g1", c.params.g1},
                      {"g2", c.params.g2},
                      {"delta", c.params.delta},
                      {"Delta", c.params.Delta},
                      {"eta", c.params.eta},
                      {"kappa", c.params.kappa},
                      {"gamma", c.params.gamma},
                      {"drive_phase", c.params.drive_phase},
                      {"n_cav", c.n_cav},
                      {"threads", c.threads},
                      {"format", c.format},
                      {"radiance", c.radiance},
                      {"x_axis", axis(c.x_axis)},
                      {"y_axis", axis(c.y_axis)},
                      {"hpb_track", {{"branch", to_string(c.branch)}, {"K", c.K_values}}},
                      {"spectrum",
                       {{"min", c.spectrum_axis.min},
                        {"max", c.spectrum_axis.max},
                        {"points", c.spectrum_axis.points}}}};
  if (c.params.gamma2) j["gamma2"] = *c.params.gamma2;
  return j;
}

}  // namespace hpb
