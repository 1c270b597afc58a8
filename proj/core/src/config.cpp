#include "rrambb/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "rrambb/csv.hpp"

namespace rrambb {

namespace {

using Number = double;
using Array = std::vector<double>;
using Value = std::variant<std::string, bool, std::int64_t, double, Array>;

struct Entry {
  Value value;
  int line;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& tok, Value& out) {
  std::string t;
  for (char c : tok) {
    if (c != '_') t.push_back(c);
  }
  if (t.empty()) return false;
  const std::string body = (t[0] == '+' || t[0] == '-') ? t.substr(1) : t;
  const double sign = t[0] == '-' ? -1.0 : 1.0;
  if (body == "inf") {
    out = sign * std::numeric_limits<double>::infinity();
    return true;
  }
  if (body == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  const bool is_float = t.find_first_of(".eE") != std::string::npos;
  const char* first = t.data() + (t[0] == '+' ? 1 : 0);
  const char* last = t.data() + t.size();
  if (!is_float) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) return false;
    out = v;
    return true;
  }
  double v = 0;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) return false;
  out = v;
  return true;
}

Value parse_value(const std::string& raw, int line) {
  if (raw.empty()) throw ConfigParseError(line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigParseError(line, "unterminated string");
    std::string s;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        const char n = raw[++i];
        s.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
      } else {
        s.push_back(raw[i]);
      }
    }
    return s;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigParseError(line, "arrays must close on the same line");
    Array arr;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;  // trailing comma
      Value v;
      if (!parse_number(item, v)) throw ConfigParseError(line, "array items must be numbers, got '" + item + "'");
      arr.push_back(std::holds_alternative<std::int64_t>(v) ? static_cast<double>(std::get<std::int64_t>(v))
                                                            : std::get<double>(v));
    }
    return arr;
  }
  Value v;
  if (!parse_number(raw, v)) throw ConfigParseError(line, "cannot parse value '" + raw + "'");
  return v;
}

const std::set<std::string> kSections = {"frame", "receiver", "device", "sweep", "bounds", "output"};

std::map<std::string, Entry> tokenize(const std::string& text) {
  std::map<std::string, Entry> entries;
  std::set<std::string> sections;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigParseError(line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigParseError(line, "empty section name");
      if (!kSections.count(section)) throw ConfigParseError(line, "unknown section [" + section + "]");
      if (!sections.insert(section).second) throw ConfigParseError(line, "duplicate section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigParseError(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty() || key.find_first_of(" \t\"") != std::string::npos) {
      throw ConfigParseError(line, "invalid key '" + key + "'");
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (entries.count(full)) throw ConfigParseError(line, "duplicate key '" + full + "'");
    entries.emplace(full, Entry{parse_value(trim(s.substr(eq + 1)), line), line});
  }
  return entries;
}

// Typed accessors; `key` is the dotted name used in error messages.
double as_double(const std::string& key, const Entry& e) {
  if (auto* i = std::get_if<std::int64_t>(&e.value)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&e.value)) return *d;
  throw ConfigError(key, "expected a number (line " + std::to_string(e.line) + ")");
}

std::int64_t as_int(const std::string& key, const Entry& e) {
  if (auto* i = std::get_if<std::int64_t>(&e.value)) return *i;
  throw ConfigError(key, "expected an integer (line " + std::to_string(e.line) + ")");
}

int as_int32(const std::string& key, const Entry& e) {
  const std::int64_t v = as_int(key, e);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key, "integer out of range");
  }
  return static_cast<int>(v);
}

bool as_bool(const std::string& key, const Entry& e) {
  if (auto* b = std::get_if<bool>(&e.value)) return *b;
  throw ConfigError(key, "expected true or false (line " + std::to_string(e.line) + ")");
}

std::string as_string(const std::string& key, const Entry& e) {
  if (auto* s = std::get_if<std::string>(&e.value)) return *s;
  throw ConfigError(key, "expected a quoted string (line " + std::to_string(e.line) + ")");
}

Array as_array(const std::string& key, const Entry& e) {
  if (auto* a = std::get_if<Array>(&e.value)) return *a;
  throw ConfigError(key, "expected an array of numbers (line " + std::to_string(e.line) + ")");
}

using Setter = std::function<void(RunConfig&, const std::string&, const Entry&)>;

const std::vector<std::pair<std::string, Setter>>& frame_and_run_keys() {
  static const std::vector<std::pair<std::string, Setter>> keys = {
      {"frame.n_c", [](RunConfig& c, auto& k, auto& e) { c.frame.n_c = as_int32(k, e); }},
      {"frame.n_t", [](RunConfig& c, auto& k, auto& e) { c.frame.n_t = as_int32(k, e); }},
      {"frame.n_r", [](RunConfig& c, auto& k, auto& e) { c.frame.n_r = as_int32(k, e); }},
      {"frame.pilots", [](RunConfig& c, auto& k, auto& e) { c.frame.pilots = as_int32(k, e); }},
      {"frame.symbols", [](RunConfig& c, auto& k, auto& e) { c.frame.symbols = as_int32(k, e); }},
      {"frame.cp_len", [](RunConfig& c, auto& k, auto& e) { c.frame.cp_len = as_int32(k, e); }},
      {"frame.snr_db", [](RunConfig& c, auto& k, auto& e) { c.frame.snr_db = as_double(k, e); }},
      {"frame.flat", [](RunConfig& c, auto& k, auto& e) { c.frame.flat = as_bool(k, e); }},
      {"frame.fading", [](RunConfig& c, auto& k, auto& e) { c.frame.fading = fading_from_string(as_string(k, e)); }},
      {"frame.simulate_data", [](RunConfig& c, auto& k, auto& e) { c.frame.simulate_data = as_bool(k, e); }},
      {"frame.seed",
       [](RunConfig& c, auto& k, auto& e) {
         const std::int64_t v = as_int(k, e);
         if (v < 0) throw ConfigError(k, "must be >= 0");
         c.frame.seed = static_cast<std::uint64_t>(v);
       }},
      {"receiver.backend", [](RunConfig& c, auto& k, auto& e) { c.frame.backend = backend_from_string(as_string(k, e)); }},
      {"receiver.scheme", [](RunConfig& c, auto& k, auto& e) { c.frame.scheme = scheme_from_string(as_string(k, e)); }},
      {"receiver.detector",
       [](RunConfig& c, auto& k, auto& e) { c.frame.detector = mimo::detector_mode_from_string(as_string(k, e)); }},
      {"receiver.rram_dft", [](RunConfig& c, auto& k, auto& e) { c.frame.rram_dft = as_bool(k, e); }},
      {"receiver.rram_detector", [](RunConfig& c, auto& k, auto& e) { c.frame.rram_detector = as_bool(k, e); }},
      {"receiver.rram_idft", [](RunConfig& c, auto& k, auto& e) { c.frame.rram_idft = as_bool(k, e); }},
      {"receiver.exact_programming",
       [](RunConfig& c, auto& k, auto& e) { c.frame.exact_programming = as_bool(k, e); }},
      {"receiver.sequential_pairs",
       [](RunConfig& c, auto& k, auto& e) { c.frame.sequential_pairs = as_bool(k, e); }},
      {"device.copies", [](RunConfig& c, auto& k, auto& e) { c.frame.copies = as_int32(k, e); }},
      {"device.p_stuck_on", [](RunConfig& c, auto& k, auto& e) { c.frame.p_stuck_on = as_double(k, e); }},
      {"device.p_stuck_off", [](RunConfig& c, auto& k, auto& e) { c.frame.p_stuck_off = as_double(k, e); }},
      {"device.defect_correction",
       [](RunConfig& c, auto& k, auto& e) { c.frame.defect_correction = as_bool(k, e); }},
      {"device.g_min", [](RunConfig& c, auto& k, auto& e) { c.frame.device.g_min = as_double(k, e); }},
      {"device.g_max", [](RunConfig& c, auto& k, auto& e) { c.frame.device.g_max = as_double(k, e); }},
      {"device.n_states", [](RunConfig& c, auto& k, auto& e) { c.frame.device.n_states = as_int32(k, e); }},
      {"device.pulse_width", [](RunConfig& c, auto& k, auto& e) { c.frame.device.pulse_width = as_double(k, e); }},
      {"device.gamma_pot", [](RunConfig& c, auto& k, auto& e) { c.frame.device.gamma_pot = as_double(k, e); }},
      {"device.gamma_dep", [](RunConfig& c, auto& k, auto& e) { c.frame.device.gamma_dep = as_double(k, e); }},
      {"device.v_set", [](RunConfig& c, auto& k, auto& e) { c.frame.device.v_set = as_double(k, e); }},
      {"device.v_reset", [](RunConfig& c, auto& k, auto& e) { c.frame.device.v_reset = as_double(k, e); }},
      {"device.v_read", [](RunConfig& c, auto& k, auto& e) { c.frame.device.v_read = as_double(k, e); }},
      {"device.v_full_reset", [](RunConfig& c, auto& k, auto& e) { c.frame.device.v_full_reset = as_double(k, e); }},
      {"device.sigma_read", [](RunConfig& c, auto& k, auto& e) { c.frame.device.sigma_read = as_double(k, e); }},
      {"sweep.snr_db", [](RunConfig& c, auto& k, auto& e) { c.snr_values = as_array(k, e); }},
      {"sweep.antennas", [](RunConfig& c, auto& k, auto& e) { c.antenna_values = as_array(k, e); }},
      {"sweep.trials", [](RunConfig& c, auto& k, auto& e) { c.trials = as_int32(k, e); }},
      {"sweep.jobs", [](RunConfig& c, auto& k, auto& e) { c.jobs = as_int32(k, e); }},
      {"bounds.sizes", [](RunConfig& c, auto& k, auto& e) { c.bound_sizes = as_array(k, e); }},
      {"bounds.trials", [](RunConfig& c, auto& k, auto& e) { c.bound_trials = as_int32(k, e); }},
      {"bounds.mode", [](RunConfig& c, auto& k, auto& e) { c.bound_mode = latency::mc_mode_from_string(as_string(k, e)); }},
      {"output.dir", [](RunConfig& c, auto& k, auto& e) { c.output_dir = as_string(k, e); }},
  };
  return keys;
}

void validate_run(const RunConfig& c) {
  c.frame.validate();
  if (c.trials < 1) throw ConfigError("sweep.trials", "must be >= 1");
  if (c.jobs < 1) throw ConfigError("sweep.jobs", "must be >= 1");
  if (c.snr_values.empty()) throw ConfigError("sweep.snr_db", "must not be empty");
  if (c.antenna_values.empty()) throw ConfigError("sweep.antennas", "must not be empty");
  for (double v : c.antenna_values) {
    if (!(v >= 1) || v != std::floor(v)) throw ConfigError("sweep.antennas", "entries must be positive integers");
  }
  if (c.bound_trials < 1) throw ConfigError("bounds.trials", "must be >= 1");
  for (double v : c.bound_sizes) {
    if (!(v >= 2) || v != std::floor(v)) throw ConfigError("bounds.sizes", "entries must be integers >= 2");
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  return out + "\"";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::string s = format_double(v);
  // Keep floats visibly floats.
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string arr(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const auto entries = tokenize(text);
  RunConfig c;
  // The preset goes first so explicit device fields override it.
  if (auto it = entries.find("device.preset"); it != entries.end()) {
    c.device_preset = as_string("device.preset", it->second);
    c.frame.device = preset(c.device_preset);
  }
  std::map<std::string, const Setter*> known;
  for (const auto& [k, s] : frame_and_run_keys()) known.emplace(k, &s);
  for (const auto& [key, entry] : entries) {
    if (key == "device.preset") continue;
    auto it = known.find(key);
    if (it == known.end()) throw ConfigError(key, "unknown key (line " + std::to_string(entry.line) + ")");
    (*it->second)(c, key, entry);
  }
  validate_run(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& c) {
  const FrameConfig& f = c.frame;
  const DeviceModel& d = f.device;
  std::ostringstream o;
  o << "[frame]\n"
    << "n_c = " << f.n_c << "\n"
    << "n_t = " << f.n_t << "\n"
    << "n_r = " << f.n_r << "\n"
    << "pilots = " << f.pilots << "\n"
    << "symbols = " << f.symbols << "\n"
    << "cp_len = " << f.cp_len << "\n"
    << "snr_db = " << num(f.snr_db) << "\n"
    << "flat = " << flag(f.flat) << "\n"
    << "fading = " << quote(to_string(f.fading)) << "\n"
    << "simulate_data = " << flag(f.simulate_data) << "\n"
    << "seed = " << f.seed << "\n\n"
    << "[receiver]\n"
    << "backend = " << quote(to_string(f.backend)) << "\n"
    << "scheme = " << quote(to_string(f.scheme)) << "\n"
    << "detector = " << quote(mimo::to_string(f.detector)) << "\n"
    << "rram_dft = " << flag(f.rram_dft) << "\n"
    << "rram_detector = " << flag(f.rram_detector) << "\n"
    << "rram_idft = " << flag(f.rram_idft) << "\n"
    << "exact_programming = " << flag(f.exact_programming) << "\n"
    << "sequential_pairs = " << flag(f.sequential_pairs) << "\n\n"
    << "[device]\n"
    << "preset = " << quote(c.device_preset) << "\n"
    << "copies = " << f.copies << "\n"
    << "p_stuck_on = " << num(f.p_stuck_on) << "\n"
    << "p_stuck_off = " << num(f.p_stuck_off) << "\n"
    << "defect_correction = " << flag(f.defect_correction) << "\n"
    << "g_min = " << num(d.g_min) << "\n"
    << "g_max = " << num(d.g_max) << "\n"
    << "n_states = " << d.n_states << "\n"
    << "pulse_width = " << num(d.pulse_width) << "\n"
    << "gamma_pot = " << num(d.gamma_pot) << "\n"
    << "gamma_dep = " << num(d.gamma_dep) << "\n"
    << "v_set = " << num(d.v_set) << "\n"
    << "v_reset = " << num(d.v_reset) << "\n"
    << "v_read = " << num(d.v_read) << "\n"
    << "v_full_reset = " << num(d.v_full_reset) << "\n"
    << "sigma_read = " << num(d.sigma_read) << "\n\n"
    << "[sweep]\n"
    << "snr_db = " << arr(c.snr_values) << "\n"
    << "antennas = " << arr(c.antenna_values) << "\n"
    << "trials = " << c.trials << "\n"
    << "jobs = " << c.jobs << "\n\n"
    << "[bounds]\n"
    << "sizes = " << arr(c.bound_sizes) << "\n"
    << "trials = " << c.bound_trials << "\n"
    << "mode = " << quote(latency::to_string(c.bound_mode)) << "\n\n"
    << "[output]\n"
    << "dir = " << quote(c.output_dir) << "\n";
  return o.str();
}

}  // namespace rrambb
