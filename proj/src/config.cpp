#include "tonesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace tonesim {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += "; ";
    out += item;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  return std::nullopt;
}

// "1, 2, 5..8" or "[1, 2, 5..8]" -> 1 2 5 6 7 8
std::optional<std::vector<std::int64_t>> parse_int_list(std::string_view s) {
  std::vector<std::int64_t> out;
  s = trim(s);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') return std::nullopt;
    s = s.substr(1, s.size() - 2);
  }
  for (std::string_view item : split_list(s)) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      auto v = parse_int(item);
      if (!v) return std::nullopt;
      out.push_back(*v);
      continue;
    }
    auto lo = parse_int(item.substr(0, dots));
    auto hi = parse_int(item.substr(dots + 2));
    if (!lo || !hi || *lo > *hi || *hi - *lo > 100000) return std::nullopt;
    for (std::int64_t v = *lo; v <= *hi; ++v) out.push_back(v);
  }
  return out;
}

struct KeyedProblem {
  std::string key;  // "section.key", empty when not tied to one key
  std::string message;
};

std::vector<KeyedProblem> validate_keyed(const ScenarioConfig& c) {
  std::vector<KeyedProblem> problems;
  auto add = [&](std::string key, std::string msg) {
    problems.push_back({std::move(key), std::move(msg)});
  };
  if (c.n < 0) add("scenario.n", "n must be >= 0");
  if (c.m_list.empty()) add("scenario.m_list", "m_list must not be empty");
  for (int m : c.m_list) {
    if (m < 0) add("scenario.m_list", "every M must be >= 0 (got " + std::to_string(m) + ")");
    if (m >= 0 && c.n + m < 1) {
      add("scenario.m_list", "N + M must be >= 1 (M = " + std::to_string(m) + ")");
    }
  }
  if (c.schemes.empty()) add("scenario.schemes", "schemes must not be empty");
  if (c.seeds.empty()) add("scenario.seeds", "seeds must not be empty");
  if (c.sim_duration.us <= 0) add("scenario.sim_duration_us", "sim_duration_us must be positive");
  if (c.warmup.us < 0 || c.warmup >= c.sim_duration) {
    add("scenario.warmup_us", "warmup_us must be in [0, sim_duration_us)");
  }
  if (c.detection_delay.us < 0) add("scenario.detection_delay_us", "detection_delay_us must be >= 0");
  if (c.urllc_mean_interarrival.us <= 0) {
    add("scenario.urllc_mean_interarrival_us", "urllc_mean_interarrival_us must be positive");
  }
  if (c.regular.data_airtime > kMaxRegularAirtime) {
    add("regular.data_airtime_us",
        "[regular] data_airtime_us = " + std::to_string(c.regular.data_airtime.us) +
            " exceeds the " + std::to_string(kMaxRegularAirtime.us) +
            " us bound on legacy frame airtime (about 5 ms)");
  }
  auto section = [&](const std::string& name, const std::vector<std::string>& msgs) {
    for (const auto& msg : msgs) {
      // Messages start with the offending key.
      add(name + "." + msg.substr(0, msg.find(' ')), "[" + name + "] " + msg);
    }
  };
  section("phy", validate(c.phy));
  section("regular", validate(c.regular));
  section("urllc", validate(c.urllc));
  section("legacy_urllc", validate(c.legacy_urllc));
  return problems;
}

class Parser {
 public:
  ScenarioConfig parse(std::string_view text) {
    int line_no = 0;
    std::string section = "scenario";
    while (!text.empty()) {
      ++line_no;
      const auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
      if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(line_no, "malformed section header '" + std::string(line) + "'");
          continue;
        }
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (!known_section(section)) error(line_no, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        error(line_no, "expected 'key = value'");
        continue;
      }
      std::string key(trim(line.substr(0, eq)));
      std::transform(key.begin(), key.end(), key.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      const std::string_view value = trim(line.substr(eq + 1));
      if (!known_section(section)) continue;
      const std::string full = section + "." + key;
      if (!seen_.insert(full).second) {
        error(line_no, "duplicate key '" + full + "'");
        continue;
      }
      lines_[full] = line_no;
      assign(section, key, value, line_no);
    }

    // The legacy URLLC class inherits from [urllc] unless set explicitly.
    EdcaParams legacy = config_.urllc;
    for (const auto& apply : legacy_overrides_) apply(legacy);
    config_.legacy_urllc = legacy;

    for (const auto& p : validate_keyed(config_)) {
      const auto it = lines_.find(p.key);
      if (it != lines_.end()) {
        error(it->second, p.message);
      } else {
        problems_.push_back(p.message);
      }
    }
    if (!problems_.empty()) throw ConfigError(problems_);
    return config_;
  }

 private:
  static bool known_section(const std::string& s) {
    return s == "scenario" || s == "phy" || s == "regular" || s == "urllc" || s == "legacy_urllc";
  }

  void error(int line, const std::string& msg) {
    problems_.push_back("line " + std::to_string(line) + ": " + msg);
  }

  bool set_int(std::string_view value, int line, const std::string& key, std::int64_t lo,
               std::int64_t& out) {
    auto v = parse_int(value);
    if (!v) {
      error(line, "malformed number '" + std::string(value) + "' for " + key);
      return false;
    }
    if (*v < lo) {
      error(line, key + " must be >= " + std::to_string(lo));
      return false;
    }
    out = *v;
    return true;
  }

  bool set_time(std::string_view value, int line, const std::string& key, std::int64_t lo,
                SimTime& out) {
    std::int64_t v = 0;
    if (!set_int(value, line, key, lo, v)) return false;
    out = SimTime{v};
    return true;
  }

  void assign_params(EdcaParams& p, const std::string& key, std::string_view value, int line) {
    std::int64_t v = 0;
    if (key == "aifsn") {
      if (set_int(value, line, key, 2, v)) p.aifsn = static_cast<int>(v);
    } else if (key == "cw_min") {
      if (set_int(value, line, key, 0, v)) p.cw_min = static_cast<int>(v);
    } else if (key == "cw_max") {
      if (set_int(value, line, key, 0, v)) p.cw_max = static_cast<int>(v);
    } else if (key == "retry_limit") {
      if (set_int(value, line, key, 0, v)) p.retry_limit = static_cast<int>(v);
    } else if (key == "data_airtime_us") {
      set_time(value, line, key, 1, p.data_airtime);
    } else if (key == "ack_airtime_us") {
      set_time(value, line, key, 1, p.ack_airtime);
    } else if (key == "payload_bits") {
      set_int(value, line, key, 0, p.payload_bits);
    } else {
      error(line, "unknown key '" + key + "'");
    }
  }

  void assign(const std::string& section, const std::string& key, std::string_view value, int line) {
    std::int64_t v = 0;
    if (section == "scenario") {
      if (key == "n") {
        if (set_int(value, line, key, 0, v)) config_.n = static_cast<int>(v);
      } else if (key == "m_list") {
        auto list = parse_int_list(value);
        if (!list || list->empty()) {
          error(line, "malformed integer list for m_list");
        } else {
          config_.m_list.clear();
          for (auto m : *list) config_.m_list.push_back(static_cast<int>(m));
        }
      } else if (key == "schemes") {
        std::vector<Scheme> schemes;
        for (std::string_view item : split_list(value)) {
          if (item == "both") {
            schemes = {Scheme::kLegacy, Scheme::kProposed};
          } else if (auto s = parse_scheme(item)) {
            schemes.push_back(*s);
          } else {
            error(line, "unknown scheme '" + std::string(item) + "' (legacy, proposed, both)");
          }
        }
        config_.schemes = schemes;
      } else if (key == "seeds") {
        auto list = parse_int_list(value);
        if (!list || list->empty() ||
            std::any_of(list->begin(), list->end(), [](std::int64_t s) { return s < 0; })) {
          error(line, "malformed seed list");
        } else {
          config_.seeds.assign(list->begin(), list->end());
        }
      } else if (key == "sim_duration_us") {
        set_time(value, line, key, 1, config_.sim_duration);
      } else if (key == "warmup_us") {
        set_time(value, line, key, 0, config_.warmup);
      } else if (key == "detection_delay_us") {
        set_time(value, line, key, 0, config_.detection_delay);
      } else if (key == "urllc_mean_interarrival_us") {
        set_time(value, line, key, 1, config_.urllc_mean_interarrival);
      } else if (key == "trace") {
        if (auto b = parse_bool(value)) {
          config_.trace_enabled = *b;
        } else {
          error(line, "malformed boolean '" + std::string(value) + "' for trace");
        }
      } else {
        error(line, "unknown key '" + key + "'");
      }
    } else if (section == "phy") {
      if (key == "slot_us") {
        set_time(value, line, key, 1, config_.phy.slot_time);
      } else if (key == "sifs_us") {
        set_time(value, line, key, 1, config_.phy.sifs);
      } else if (key == "ack_timeout_guard_us") {
        set_time(value, line, key, 1, config_.phy.ack_timeout_guard);
      } else {
        error(line, "unknown key '" + key + "'");
      }
    } else if (section == "regular") {
      assign_params(config_.regular, key, value, line);
    } else if (section == "urllc") {
      assign_params(config_.urllc, key, value, line);
    } else if (section == "legacy_urllc") {
      // Validate now against a scratch copy, apply later on top of [urllc].
      EdcaParams scratch;
      const std::size_t before = problems_.size();
      assign_params(scratch, key, value, line);
      if (problems_.size() == before) {
        const std::string k = key;
        const std::string val(value);
        legacy_overrides_.push_back([this, k, val, line](EdcaParams& p) {
          assign_params(p, k, val, line);
        });
      }
    }
  }

  ScenarioConfig config_;
  std::vector<std::string> problems_;
  std::set<std::string> seen_;
  std::map<std::string, int> lines_;
  std::vector<std::function<void(EdcaParams&)>> legacy_overrides_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration: " + join(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> out;
  for (auto& p : validate_keyed(c)) out.push_back(std::move(p.message));
  return out;
}

ScenarioConfig parse_config(std::string_view text) {
  return Parser().parse(text);
}

RunConfig ScenarioConfig::run_config(Scheme scheme, int m, std::uint64_t seed) const {
  RunConfig rc;
  rc.scheme = scheme;
  rc.n_regular = n;
  rc.n_urllc = m;
  rc.seed = seed;
  rc.sim_duration = sim_duration;
  rc.warmup = warmup;
  rc.phy = phy;
  rc.regular = regular;
  rc.urllc = urllc;
  rc.legacy_urllc = legacy_urllc;
  rc.detection_delay = detection_delay;
  rc.urllc_mean_interarrival = urllc_mean_interarrival;
  return rc;
}

}  // namespace tonesim
