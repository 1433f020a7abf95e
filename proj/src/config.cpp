#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pocs/harness.hpp"

namespace pocs {
namespace {

using nlohmann::json;

void require_known_keys(const json& obj, const std::set<std::string>& known,
                        const std::string& scope) {
  for (const auto& item : obj.items()) {
    if (known.count(item.key()) == 0)
      throw std::invalid_argument("config: unknown key \"" + item.key() + "\" in " + scope);
  }
}

ChannelKind parse_channel(const std::string& s) {
  if (s == "clean") return ChannelKind::kClean;
  if (s == "post_sign") return ChannelKind::kPostSign;
  if (s == "pre_sign") return ChannelKind::kPreSign;
  if (s == "corruption") return ChannelKind::kCorruption;
  if (s == "combined") return ChannelKind::kCombined;
  throw std::invalid_argument("config: channel must be one of clean, post_sign, pre_sign, "
                              "corruption, combined");
}

const char* channel_name(ChannelKind c) {
  switch (c) {
    case ChannelKind::kClean: return "clean";
    case ChannelKind::kPostSign: return "post_sign";
    case ChannelKind::kPreSign: return "pre_sign";
    case ChannelKind::kCorruption: return "corruption";
    case ChannelKind::kCombined: return "combined";
  }
  return "clean";
}

std::vector<double> parse_grid(const json& j, const std::string& name) {
  if (!j.is_array()) throw std::invalid_argument("config: " + name + " must be an array");
  std::vector<double> grid;
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument("config: " + name + " entries must be numbers");
    const double d = v.get<double>();
    if (d < 0.0) throw std::invalid_argument("config: " + name + " entries must be nonnegative");
    grid.push_back(d);
  }
  if (grid.empty()) throw std::invalid_argument("config: " + name + " must not be empty");
  return grid;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  require_known_keys(j, {"n", "m", "s", "trials", "base_seed", "channel", "tau0_grid",
                         "zeta0m_grid", "epsilon_mode", "estimator", "signal", "power_q",
                         "combined_constants", "fixed_matrix", "threads", "solver", "out",
                         "format"},
                     "top-level object");

  ExperimentConfig cfg;
  if (j.contains("n")) cfg.n = j["n"].get<Index>();
  if (j.contains("m")) cfg.m = j["m"].get<Index>();
  if (j.contains("s")) cfg.s = j["s"].get<int>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("channel")) cfg.channel = parse_channel(j["channel"].get<std::string>());
  if (j.contains("tau0_grid")) cfg.tau0_grid = parse_grid(j["tau0_grid"], "tau0_grid");
  if (j.contains("zeta0m_grid")) cfg.zeta0m_grid = parse_grid(j["zeta0m_grid"], "zeta0m_grid");
  if (j.contains("epsilon_mode")) {
    const std::string mode = j["epsilon_mode"].get<std::string>();
    if (mode == "theorem")
      cfg.epsilon_mode = EpsilonMode::kTheorem;
    else if (mode == "oracle")
      cfg.epsilon_mode = EpsilonMode::kOracle;
    else
      throw std::invalid_argument("config: epsilon_mode must be theorem or oracle");
  }
  if (j.contains("estimator")) {
    const std::string est = j["estimator"].get<std::string>();
    if (est == "standard")
      cfg.estimator = EstimatorKind::kStandard;
    else if (est == "extended")
      cfg.estimator = EstimatorKind::kExtended;
    else
      throw std::invalid_argument("config: estimator must be standard or extended");
  }
  if (j.contains("signal")) {
    const std::string sig = j["signal"].get<std::string>();
    if (sig == "sparse")
      cfg.signal = SignalKind::kSparse;
    else if (sig == "power_law")
      cfg.signal = SignalKind::kPowerLaw;
    else
      throw std::invalid_argument("config: signal must be sparse or power_law");
  }
  if (j.contains("power_q")) cfg.power_q = j["power_q"].get<double>();
  if (j.contains("combined_constants")) {
    const json& c = j["combined_constants"];
    if (!c.is_object())
      throw std::invalid_argument("config: combined_constants must be an object");
    require_known_keys(c, {"c_tau", "c_corruption", "c_sample"}, "combined_constants");
    if (c.contains("c_tau")) cfg.combined_constants.c_tau = c["c_tau"].get<double>();
    if (c.contains("c_corruption"))
      cfg.combined_constants.c_corruption = c["c_corruption"].get<double>();
    if (c.contains("c_sample")) cfg.combined_constants.c_sample = c["c_sample"].get<double>();
  }
  if (j.contains("fixed_matrix")) cfg.fixed_matrix = j["fixed_matrix"].get<bool>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("solver")) {
    const json& s = j["solver"];
    if (!s.is_object()) throw std::invalid_argument("config: solver must be an object");
    require_known_keys(s, {"rho", "tol_primal", "tol_dual", "max_iter", "over_relaxation",
                           "adaptive_penalty"},
                       "solver");
    if (s.contains("rho")) cfg.solver.rho = s["rho"].get<double>();
    if (s.contains("tol_primal")) cfg.solver.tol_primal = s["tol_primal"].get<double>();
    if (s.contains("tol_dual")) cfg.solver.tol_dual = s["tol_dual"].get<double>();
    if (s.contains("max_iter")) cfg.solver.max_iter = s["max_iter"].get<int>();
    if (s.contains("over_relaxation"))
      cfg.solver.over_relaxation = s["over_relaxation"].get<double>();
    if (s.contains("adaptive_penalty"))
      cfg.solver.adaptive_penalty = s["adaptive_penalty"].get<bool>();
  }
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("format")) {
    cfg.format = j["format"].get<std::string>();
    if (cfg.format != "csv" && cfg.format != "json")
      throw std::invalid_argument("config: format must be csv or json");
  }

  if (cfg.n < 1 || cfg.m < 2 || cfg.s < 1 || cfg.trials < 1)
    throw std::invalid_argument("config: n, m, s, trials must be positive (m >= 2)");
  if (cfg.s > cfg.n) throw std::invalid_argument("config: s must not exceed n");
  if (cfg.threads < 1) throw std::invalid_argument("config: threads must be positive");
  if (cfg.power_q <= 0.0) throw std::invalid_argument("config: power_q must be positive");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["s"] = cfg.s;
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  j["channel"] = channel_name(cfg.channel);
  j["tau0_grid"] = cfg.tau0_grid.empty() ? default_tau0_grid(cfg.channel) : cfg.tau0_grid;
  j["zeta0m_grid"] =
      cfg.zeta0m_grid.empty() ? default_zeta0m_grid(cfg.channel) : cfg.zeta0m_grid;
  j["epsilon_mode"] = cfg.epsilon_mode == EpsilonMode::kOracle ? "oracle" : "theorem";
  j["estimator"] = cfg.estimator == EstimatorKind::kExtended ? "extended" : "standard";
  j["signal"] = cfg.signal == SignalKind::kPowerLaw ? "power_law" : "sparse";
  j["power_q"] = cfg.power_q;
  j["combined_constants"] = {{"c_tau", cfg.combined_constants.c_tau},
                             {"c_corruption", cfg.combined_constants.c_corruption},
                             {"c_sample", cfg.combined_constants.c_sample}};
  j["fixed_matrix"] = cfg.fixed_matrix;
  j["threads"] = cfg.threads;
  j["solver"] = {{"rho", cfg.solver.rho},
                 {"tol_primal", cfg.solver.tol_primal},
                 {"tol_dual", cfg.solver.tol_dual},
                 {"max_iter", cfg.solver.max_iter},
                 {"over_relaxation", cfg.solver.over_relaxation},
                 {"adaptive_penalty", cfg.solver.adaptive_penalty}};
  j["out"] = cfg.out;
  j["format"] = cfg.format;
  return j.dump();
}

}  // namespace pocs
