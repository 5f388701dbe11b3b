#include "run_config.hpp"

#include <fstream>
#include <sstream>

namespace gms::cli {

namespace {

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

long parse_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ParseError(key + ": expected an integer, got '" + v + "'");
  return x;
}

long parse_positive(const std::string& key, const std::string& v) {
  long x = parse_long(key, v);
  if (x <= 0) throw InvalidArgument(key + " must be positive");
  return x;
}

std::vector<Integer> parse_table(const std::string& key, const std::string& v) {
  std::vector<Integer> out;
  for (const auto& s : split(v, ',')) {
    Integer z;
    if (s.empty() || z.set_str(s, 10) != 0) throw ParseError(key + ": bad entry '" + s + "'");
    out.push_back(z);
  }
  return out;
}

}  // namespace

ParameterSchedule RunConfig::schedule() const {
  if (mode == ScheduleMode::conforming) return ParameterSchedule::conforming();
  if (m_table.empty() && n_table.empty()) return ParameterSchedule::default_compact();
  return ParameterSchedule::compact(m_table, n_table, law);
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "mode") {
    cfg.mode = parse_mode(v);
  } else if (key == "m") {
    cfg.m_table = parse_table(key, v);
  } else if (key == "n") {
    cfg.n_table = parse_table(key, v);
  } else if (key == "law") {
    cfg.law = parse_law(v);
  } else if (key == "gen-cap") {
    long g = parse_long(key, v);
    if (g < 0) throw InvalidArgument("gen-cap must be nonnegative");
    cfg.caps.generation_cap = static_cast<int>(g);
  } else if (key == "window") {
    cfg.caps.window = parse_positive(key, v);
  } else if (key == "supp-cap") {
    cfg.caps.max_support_size = static_cast<std::size_t>(parse_positive(key, v));
  } else if (key == "arity-cap") {
    cfg.caps.arity_cap = parse_positive(key, v);
  } else if (key == "weights") {
    cfg.caps.regular_weights.clear();
    for (const auto& s : split(v, ',')) cfg.caps.regular_weights.push_back(static_cast<int>(parse_positive(key, s)));
  } else if (key == "depth") {
    cfg.depth = static_cast<int>(parse_positive(key, v));
  } else if (key == "k-cap") {
    long k = parse_long(key, v);
    if (k < 0) throw InvalidArgument("k-cap must be nonnegative");
    cfg.k_cap = static_cast<int>(k);
  } else if (key == "special") {
    cfg.models.clear();
    if (v == "none") return;
    for (const auto& entry : split(v, ';')) {
      auto f = split(entry, ',');
      if (f.size() != 5) throw ParseError("special: expected j,d,seed,start,width in '" + entry + "'");
      cfg.models.push_back({static_cast<int>(parse_positive(key, f[0])), static_cast<int>(parse_positive(key, f[1])),
                            static_cast<int>(parse_long(key, f[2])), parse_positive(key, f[3]),
                            parse_positive(key, f[4])});
    }
  } else if (key == "registry") {
    if (v.empty()) throw ParseError("registry: empty path");
    cfg.registry = v;
  } else if (key == "seed") {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(v, &used);
      if (used != v.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("seed: expected an unsigned integer, got '" + v + "'");
    }
  } else if (key == "format") {
    if (v == "json")
      cfg.format = Format::json;
    else if (v == "text")
      cfg.format = Format::text;
    else
      throw ParseError("format must be json or text");
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream s;
  s << cfg.schedule().describe() << "; gen-cap " << cfg.caps.generation_cap << ", window " << cfg.caps.window
    << ", supp-cap " << cfg.caps.max_support_size << ", arity-cap " << cfg.caps.arity_cap << ", weights";
  for (int w : cfg.caps.regular_weights) s << " " << w;
  s << ", " << cfg.models.size() << " special model(s)";
  return s.str();
}

}  // namespace gms::cli
