#include "discs/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "discs/baselines.hpp"
#include "discs/discriminator.hpp"
#include "discs/envs.hpp"
#include "discs/hipps.hpp"

namespace discs {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected boolean, got '" + s + "'");
}

struct Field {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"method", [](const RunConfig& c) { return c.method; },
       [](RunConfig& c, const std::string& v) { c.method = v; }},
      {"m", [](const RunConfig& c) { return std::to_string(c.m); },
       [](RunConfig& c, const std::string& v) { c.m = std::stoi(v); }},
      {"env", [](const RunConfig& c) { return c.env; },
       [](RunConfig& c, const std::string& v) { c.env = v; }},
      {"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig& c, const std::string& v) { c.seed = std::stoull(v); }},
      {"total_steps", [](const RunConfig& c) { return std::to_string(c.total_steps); },
       [](RunConfig& c, const std::string& v) { c.total_steps = std::stoll(v); }},
      {"diayn_skills", [](const RunConfig& c) { return std::to_string(c.diayn_skills); },
       [](RunConfig& c, const std::string& v) { c.diayn_skills = std::stoi(v); }},
      {"batch_size", [](const RunConfig& c) { return std::to_string(c.batch_size); },
       [](RunConfig& c, const std::string& v) { c.batch_size = std::stoi(v); }},
      {"disc_batch_size", [](const RunConfig& c) { return std::to_string(c.disc_batch_size); },
       [](RunConfig& c, const std::string& v) { c.disc_batch_size = std::stoi(v); }},
      {"buffer_capacity", [](const RunConfig& c) { return std::to_string(c.buffer_capacity); },
       [](RunConfig& c, const std::string& v) { c.buffer_capacity = std::stoll(v); }},
      {"gamma", [](const RunConfig& c) { return format_double(c.gamma); },
       [](RunConfig& c, const std::string& v) { c.gamma = std::stod(v); }},
      {"alpha", [](const RunConfig& c) { return format_double(c.alpha); },
       [](RunConfig& c, const std::string& v) { c.alpha = std::stod(v); }},
      {"tau", [](const RunConfig& c) { return format_double(c.tau); },
       [](RunConfig& c, const std::string& v) { c.tau = std::stod(v); }},
      {"lr", [](const RunConfig& c) { return format_double(c.lr); },
       [](RunConfig& c, const std::string& v) { c.lr = std::stod(v); }},
      {"q_hidden", [](const RunConfig& c) { return format_int_list(c.q_hidden); },
       [](RunConfig& c, const std::string& v) { c.q_hidden = parse_int_list(v); }},
      {"policy_hidden", [](const RunConfig& c) { return format_int_list(c.policy_hidden); },
       [](RunConfig& c, const std::string& v) { c.policy_hidden = parse_int_list(v); }},
      {"disc_hidden", [](const RunConfig& c) { return format_int_list(c.disc_hidden); },
       [](RunConfig& c, const std::string& v) { c.disc_hidden = parse_int_list(v); }},
      {"data_collection_steps",
       [](const RunConfig& c) { return std::to_string(c.data_collection_steps); },
       [](RunConfig& c, const std::string& v) { c.data_collection_steps = std::stoi(v); }},
      {"update_steps", [](const RunConfig& c) { return std::to_string(c.update_steps); },
       [](RunConfig& c, const std::string& v) { c.update_steps = std::stoi(v); }},
      {"q_updates_per_step",
       [](const RunConfig& c) { return std::to_string(c.q_updates_per_step); },
       [](RunConfig& c, const std::string& v) { c.q_updates_per_step = std::stoi(v); }},
      {"policy_update_period",
       [](const RunConfig& c) { return std::to_string(c.policy_update_period); },
       [](RunConfig& c, const std::string& v) { c.policy_update_period = std::stoi(v); }},
      {"target_update_period",
       [](const RunConfig& c) { return std::to_string(c.target_update_period); },
       [](RunConfig& c, const std::string& v) { c.target_update_period = std::stoi(v); }},
      {"disc_update_period",
       [](const RunConfig& c) { return std::to_string(c.disc_update_period); },
       [](RunConfig& c, const std::string& v) { c.disc_update_period = std::stoll(v); }},
      {"disc_warmup", [](const RunConfig& c) { return std::to_string(c.disc_warmup); },
       [](RunConfig& c, const std::string& v) { c.disc_warmup = std::stoll(v); }},
      {"hipps_k", [](const RunConfig& c) { return std::to_string(c.hipps_k); },
       [](RunConfig& c, const std::string& v) { c.hipps_k = std::stoi(v); }},
      {"hipps_source", [](const RunConfig& c) { return c.hipps_source; },
       [](RunConfig& c, const std::string& v) { c.hipps_source = v; }},
      {"disc_variant", [](const RunConfig& c) { return c.disc_variant; },
       [](RunConfig& c, const std::string& v) { c.disc_variant = v; }},
      {"recent_window", [](const RunConfig& c) { return std::to_string(c.recent_window); },
       [](RunConfig& c, const std::string& v) { c.recent_window = std::stoll(v); }},
      {"xy_prior", [](const RunConfig& c) { return std::string(c.xy_prior ? "true" : "false"); },
       [](RunConfig& c, const std::string& v) { c.xy_prior = parse_bool(v); }},
      {"log_floor", [](const RunConfig& c) { return format_double(c.log_floor); },
       [](RunConfig& c, const std::string& v) { c.log_floor = std::stod(v); }},
      {"kappa_min", [](const RunConfig& c) { return format_double(c.kappa_min); },
       [](RunConfig& c, const std::string& v) { c.kappa_min = std::stod(v); }},
      {"kappa_max", [](const RunConfig& c) { return format_double(c.kappa_max); },
       [](RunConfig& c, const std::string& v) { c.kappa_max = std::stod(v); }},
      {"arena_half", [](const RunConfig& c) { return format_double(c.arena_half); },
       [](RunConfig& c, const std::string& v) { c.arena_half = std::stod(v); }},
      {"env_dt", [](const RunConfig& c) { return format_double(c.env_dt); },
       [](RunConfig& c, const std::string& v) { c.env_dt = std::stod(v); }},
      {"env_f_max", [](const RunConfig& c) { return format_double(c.env_f_max); },
       [](RunConfig& c, const std::string& v) { c.env_f_max = std::stod(v); }},
      {"env_drag", [](const RunConfig& c) { return format_double(c.env_drag); },
       [](RunConfig& c, const std::string& v) { c.env_drag = std::stod(v); }},
      {"env_v_max", [](const RunConfig& c) { return format_double(c.env_v_max); },
       [](RunConfig& c, const std::string& v) { c.env_v_max = std::stod(v); }},
      {"episode_length", [](const RunConfig& c) { return std::to_string(c.episode_length); },
       [](RunConfig& c, const std::string& v) { c.episode_length = std::stoi(v); }},
      {"cell_size", [](const RunConfig& c) { return format_double(c.cell_size); },
       [](RunConfig& c, const std::string& v) { c.cell_size = std::stod(v); }},
      {"log_every", [](const RunConfig& c) { return std::to_string(c.log_every); },
       [](RunConfig& c, const std::string& v) { c.log_every = std::stoll(v); }},
      {"heatmap_window", [](const RunConfig& c) { return std::to_string(c.heatmap_window); },
       [](RunConfig& c, const std::string& v) { c.heatmap_window = std::stoll(v); }},
      {"checkpoint_every", [](const RunConfig& c) { return std::to_string(c.checkpoint_every); },
       [](RunConfig& c, const std::string& v) { c.checkpoint_every = std::stoll(v); }},
      {"eval_skills", [](const RunConfig& c) { return std::to_string(c.eval_skills); },
       [](RunConfig& c, const std::string& v) { c.eval_skills = std::stoi(v); }},
  };
  return table;
}

}  // namespace

void RunConfig::validate() const {
  const auto mode = method_from_string(method);
  arena_kind_from_string(env);
  disc_variant_from_string(disc_variant);
  hipps_source_from_string(hipps_source);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (mode != MethodMode::Diayn && mode != MethodMode::SacOnly && m < 2) {
    throw std::invalid_argument("continuous skills need m >= 2");
  }
  if (total_steps < 0) throw std::invalid_argument("total_steps must be >= 0");
  if (batch_size <= 0 || disc_batch_size <= 0) {
    throw std::invalid_argument("batch sizes must be positive");
  }
  if (buffer_capacity <= 0) throw std::invalid_argument("buffer_capacity must be positive");
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma must be in [0, 1]");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau must be in [0, 1]");
  if (lr <= 0.0) throw std::invalid_argument("lr must be positive");
  if (data_collection_steps <= 0 || update_steps <= 0 || q_updates_per_step <= 0 ||
      policy_update_period <= 0 || target_update_period <= 0 || disc_update_period <= 0) {
    throw std::invalid_argument("all update rates must be positive");
  }
  if (hipps_k < 1) throw std::invalid_argument("hipps_k must be >= 1");
  if (hipps_k > 1 && mode != MethodMode::Discs) {
    throw std::invalid_argument("hipps_k > 1 requires method = discs");
  }
  if (diayn_skills < 2) throw std::invalid_argument("diayn_skills must be >= 2");
  if (recent_window <= 0) throw std::invalid_argument("recent_window must be positive");
  if (kappa_min <= 0.0 || kappa_max < kappa_min) {
    throw std::invalid_argument("kappa bounds must satisfy 0 < kappa_min <= kappa_max");
  }
  if (episode_length <= 0) throw std::invalid_argument("episode_length must be positive");
  if (cell_size <= 0.0 || arena_half <= 0.0) {
    throw std::invalid_argument("cell_size and arena_half must be positive");
  }
  if (log_every <= 0 || heatmap_window <= 0) {
    throw std::invalid_argument("logging cadences must be positive");
  }
  if (eval_skills <= 0) throw std::invalid_argument("eval_skills must be positive");
}

void RunConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (f.name == key) {
      f.set(*this, trim(value));
      return;
    }
  }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    cfg.set(key, value);
  }
  return cfg;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text);
}

std::vector<std::string> RunConfig::key_names() {
  std::vector<std::string> names;
  for (const auto& f : fields()) names.push_back(f.name);
  return names;
}

}  // namespace discs
