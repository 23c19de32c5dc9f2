#include "hetgraph/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hetgraph {

MemoryLatencyModel MemoryLatencyModel::from_coeffs(double a, double b,
                                                   std::int64_t l_min,
                                                   std::int64_t l_max) {
  MemoryLatencyModel m;
  m.a_q = std::llround(a * kQ);
  m.b_q = std::llround(b * kQ);
  m.l_min = l_min;
  m.l_max = l_max;
  m.validate();
  return m;
}

std::int64_t MemoryLatencyModel::latency_q(std::uint64_t dist_bytes) const {
  std::int64_t raw = a_q * static_cast<std::int64_t>(dist_bytes) + b_q;
  return std::clamp(raw, l_min * kQ, l_max * kQ);
}

std::int64_t MemoryLatencyModel::latency_cycles(std::uint64_t dist_bytes) const {
  std::int64_t q = latency_q(dist_bytes);
  return (q + kQ - 1) / kQ;
}

void MemoryLatencyModel::validate() const {
  HG_CHECK(a_q >= 0, "latency coefficient a must be >= 0");
  HG_CHECK(l_min > 0 && l_min <= l_max, "latency clamp bounds must satisfy 0 < l_min <= l_max");
}

void PipelineConfig::validate() const {
  HG_CHECK(n_spe > 0 && n_gpe > 0 && ii_spe > 0 && ii_gpe > 0,
           "PE counts and initiation intervals must be positive");
  HG_CHECK(s_mem > 0 && s_e > 0 && s_vprop > 0 && s_ram > 0 && s_buf > 0 && ppb_size > 0,
           "all widths and buffer sizes must be positive");
  HG_CHECK(s_mem % s_vprop == 0, "s_mem must be divisible by s_vprop");
  HG_CHECK(s_mem % s_e == 0, "s_mem must be divisible by s_e");
  HG_CHECK(s_vprop % 8 == 0 && s_mem % 8 == 0, "widths must be whole bytes");
  HG_CHECK(s_buf % s_vprop == 0, "s_buf must hold whole vertex properties");
  HG_CHECK(ppb_size % (2ull * s_mem) == 0, "ping-pong halves must hold whole blocks");
  HG_CHECK(c_const >= 0, "c_const must be >= 0");
}

void PlatformConfig::validate() const {
  HG_CHECK(n_ch >= 1, "need at least one memory channel");
  HG_CHECK(n_port >= n_res + 2, "need two ports beyond the Apply reservation");
}

std::uint32_t max_pipelines(const PlatformConfig& p) {
  p.validate();
  return std::min(p.n_ch, (p.n_port - p.n_res) / 2);
}

namespace {

using nlohmann::json;

void apply_pipeline_key(PipelineConfig& c, const std::string& key, const json& v) {
  if (key == "n_spe") c.n_spe = v.get<std::uint32_t>();
  else if (key == "n_gpe") c.n_gpe = v.get<std::uint32_t>();
  else if (key == "ii_spe") c.ii_spe = v.get<std::uint32_t>();
  else if (key == "ii_gpe") c.ii_gpe = v.get<std::uint32_t>();
  else if (key == "s_mem") c.s_mem = v.get<std::uint32_t>();
  else if (key == "s_e") c.s_e = v.get<std::uint32_t>();
  else if (key == "s_vprop") c.s_vprop = v.get<std::uint32_t>();
  else if (key == "s_ram") c.s_ram = v.get<std::uint32_t>();
  else if (key == "s_buf") c.s_buf = v.get<std::uint64_t>();
  else if (key == "ppb_size") c.ppb_size = v.get<std::uint64_t>();
  else if (key == "c_const") c.c_const = v.get<std::int64_t>();
  else throw Error("unknown pipeline config key: " + key);
}

void apply_memory_key(double& a, double& b, MemoryLatencyModel& m, const std::string& key,
                      const json& v) {
  if (key == "a") a = v.get<double>();
  else if (key == "b") b = v.get<double>();
  else if (key == "l_min") m.l_min = v.get<std::int64_t>();
  else if (key == "l_max") m.l_max = v.get<std::int64_t>();
  else throw Error("unknown memory config key: " + key);
}

void apply_platform_key(PlatformConfig& p, const std::string& key, const json& v) {
  if (key == "n_ch") p.n_ch = v.get<std::uint32_t>();
  else if (key == "n_port") p.n_port = v.get<std::uint32_t>();
  else if (key == "n_res") p.n_res = v.get<std::uint32_t>();
  else if (key == "channel_capacity") p.channel_capacity = v.get<std::uint64_t>();
  else if (key == "name") p.name = v.get<std::string>();
  else throw Error("unknown platform config key: " + key);
}

Config from_json(const json& j) {
  Config cfg;
  double a = cfg.memory.a();
  double b = cfg.memory.b();
  for (auto& [section, body] : j.items()) {
    if (section == "pipeline") {
      for (auto& [k, v] : body.items()) apply_pipeline_key(cfg.pipeline, k, v);
    } else if (section == "memory") {
      for (auto& [k, v] : body.items()) apply_memory_key(a, b, cfg.memory, k, v);
    } else if (section == "platform") {
      for (auto& [k, v] : body.items()) apply_platform_key(cfg.platform, k, v);
    } else {
      throw Error("unknown config section: " + section);
    }
  }
  cfg.memory = MemoryLatencyModel::from_coeffs(a, b, cfg.memory.l_min, cfg.memory.l_max);
  cfg.pipeline.validate();
  cfg.platform.validate();
  return cfg;
}

// Flat TOML subset: [section] headers, key = value lines, '#' comments,
// string/int/float/bool scalars. Enough to mirror the JSON schema.
json parse_toml_subset(const std::string& text) {
  json root = json::object();
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("<config>", lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      root[section] = json::object();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("<config>", lineno, "expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    key = trim(key);
    value = trim(value);
    if (key.empty() || value.empty()) throw ParseError("<config>", lineno, "expected key = value");

    json parsed;
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw ParseError("<config>", lineno, "unterminated string");
      parsed = value.substr(1, value.size() - 2);
    } else if (value == "true" || value == "false") {
      parsed = (value == "true");
    } else if (value.find('.') != std::string::npos || value.find('e') != std::string::npos) {
      parsed = std::stod(value);
    } else {
      parsed = static_cast<std::int64_t>(std::stoll(value));
    }
    if (section.empty()) throw ParseError("<config>", lineno, "key outside a section");
    root[section][key] = parsed;
  }
  return root;
}

}  // namespace

Config parse_config_text(const std::string& text, bool is_json) {
  if (is_json) return from_json(json::parse(text));
  return from_json(parse_toml_subset(text));
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return parse_config_text(buf.str(), is_json);
}

std::string config_to_json(const Config& cfg) {
  json j;
  j["pipeline"] = {{"n_spe", cfg.pipeline.n_spe},   {"n_gpe", cfg.pipeline.n_gpe},
                   {"ii_spe", cfg.pipeline.ii_spe}, {"ii_gpe", cfg.pipeline.ii_gpe},
                   {"s_mem", cfg.pipeline.s_mem},   {"s_e", cfg.pipeline.s_e},
                   {"s_vprop", cfg.pipeline.s_vprop}, {"s_ram", cfg.pipeline.s_ram},
                   {"s_buf", cfg.pipeline.s_buf},   {"ppb_size", cfg.pipeline.ppb_size},
                   {"c_const", cfg.pipeline.c_const}};
  j["memory"] = {{"a", cfg.memory.a()},
                 {"b", cfg.memory.b()},
                 {"l_min", cfg.memory.l_min},
                 {"l_max", cfg.memory.l_max}};
  j["platform"] = {{"n_ch", cfg.platform.n_ch},
                   {"n_port", cfg.platform.n_port},
                   {"n_res", cfg.platform.n_res},
                   {"channel_capacity", cfg.platform.channel_capacity},
                   {"name", cfg.platform.name}};
  return j.dump(2);
}

}  // namespace hetgraph
