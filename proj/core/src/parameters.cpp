#include "cavmag/parameters.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavmag/errors.hpp"
#include "cavmag/units.hpp"

namespace cavmag {

std::string_view to_string(Mode m) {
  return m == Mode::effective ? "effective" : "microscopic";
}

Mode parse_mode(std::string_view s) {
  if (s == "effective") return Mode::effective;
  if (s == "microscopic") return Mode::microscopic;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected effective|microscopic)");
}

std::string_view suffix(Unit u) {
  switch (u) {
    case Unit::MHz: return "MHz";
    case Unit::nHz: return "nHz";
    case Unit::K: return "K";
  }
  return "";
}

double to_internal(Unit u, double v) {
  switch (u) {
    case Unit::MHz: return units::from_MHz(v);
    case Unit::nHz: return units::from_nHz(v);
    case Unit::K: return v;
  }
  return v;
}

double to_file(Unit u, double v) {
  switch (u) {
    case Unit::MHz: return units::to_MHz(v);
    case Unit::nHz: return units::to_nHz(v);
    case Unit::K: return v;
  }
  return v;
}

namespace {

constexpr std::array<ParameterInfo, 22> kParameters{{
    {"omega_a", Unit::MHz},       {"omega_b", Unit::MHz},       {"omega_c", Unit::MHz},
    {"omega_d", Unit::MHz},       {"Delta_a", Unit::MHz},       {"Delta_b", Unit::MHz},
    {"Delta_c", Unit::MHz},       {"Delta_b_tilde", Unit::MHz}, {"Delta_c_tilde", Unit::MHz},
    {"K_b", Unit::nHz},           {"K_c", Unit::nHz},           {"G", Unit::nHz},
    {"K_b_tilde", Unit::MHz},     {"K_c_tilde", Unit::MHz},     {"G_tilde", Unit::MHz},
    {"g_ab", Unit::MHz},          {"gamma_a", Unit::MHz},       {"gamma_b", Unit::MHz},
    {"gamma_c", Unit::MHz},       {"Omega_b", Unit::MHz},       {"Omega_c", Unit::MHz},
    {"T_e", Unit::K},
}};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || s.empty() || !std::isfinite(v)) {
    throw ConfigError("line " + std::to_string(line) + ": '" + std::string(s) +
                      "' is not a finite number");
  }
  return v;
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

struct PendingAxis {
  std::vector<std::string> names;
  std::optional<std::string> min_raw, max_raw;
  std::optional<std::string> unit;  // suffix used on min/max keys
  std::optional<std::size_t> points;
  std::size_t line = 0;
};

AxisSpec finish_axis(const PendingAxis& p, int index) {
  const std::string where = "sweep.axis" + std::to_string(index);
  if (p.names.empty()) throw ConfigError(where + ": missing name");
  if (!p.min_raw || !p.max_raw) throw ConfigError(where + ": missing min/max");
  if (!p.points) throw ConfigError(where + ": missing points");
  if (*p.points < 2) throw ConfigError(where + ": points must be >= 2");

  const auto mins = split_list(*p.min_raw);
  const auto maxs = split_list(*p.max_raw);
  if (mins.size() != p.names.size() || maxs.size() != p.names.size()) {
    throw ConfigError(where + ": min/max must list one value per axis parameter");
  }
  AxisSpec axis;
  axis.points = *p.points;
  for (std::size_t i = 0; i < p.names.size(); ++i) {
    const ParameterInfo* info = find_parameter(p.names[i]);
    if (!info) throw ConfigError(where + ": unknown parameter '" + p.names[i] + "'");
    if (*p.unit != suffix(info->unit)) {
      throw ConfigError(where + ": '" + p.names[i] + "' is expressed in " +
                        std::string(suffix(info->unit)) + ", not " + *p.unit);
    }
    axis.targets.push_back({p.names[i], to_internal(info->unit, parse_double(mins[i], p.line)),
                            to_internal(info->unit, parse_double(maxs[i], p.line))});
  }
  return axis;
}

}  // namespace

std::span<const ParameterInfo> known_parameters() { return kParameters; }

const ParameterInfo* find_parameter(std::string_view name) {
  const auto it = std::find_if(kParameters.begin(), kParameters.end(),
                               [name](const ParameterInfo& p) { return p.name == name; });
  return it == kParameters.end() ? nullptr : &*it;
}

void ParameterSet::set(std::string_view name, double v) {
  if (!find_parameter(name)) throw ConfigError("unknown parameter '" + std::string(name) + "'");
  values_.insert_or_assign(std::string(name), v);
}

std::optional<double> ParameterSet::get(std::string_view name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

double ParameterSet::require(std::string_view name) const {
  const auto v = get(name);
  if (!v) {
    const ParameterInfo* info = find_parameter(name);
    const std::string key =
        std::string(name) + (info ? "_" + std::string(suffix(info->unit)) : std::string());
    throw ConfigError("missing required parameter '" + key + "'");
  }
  return *v;
}

EffectiveConfig to_effective(const ParameterSet& p) {
  EffectiveConfig cfg;
  cfg.Delta_a = p.require("Delta_a");
  cfg.Delta_b_tilde = p.require("Delta_b_tilde");
  cfg.Delta_c_tilde = p.require("Delta_c_tilde");
  cfg.K_b_tilde = p.get("K_b_tilde").value_or(0.0);
  cfg.K_c_tilde = p.get("K_c_tilde").value_or(0.0);
  cfg.G_tilde = p.get("G_tilde").value_or(0.0);
  cfg.g_ab = p.get("g_ab").value_or(0.0);
  cfg.gamma_a = p.require("gamma_a");
  cfg.gamma_b = p.require("gamma_b");
  cfg.gamma_c = p.require("gamma_c");
  const double T_e = p.get("T_e").value_or(0.0);
  try {
    const Occupancies n = bath_occupancies(p.get("omega_a"), p.get("omega_b"), p.get("omega_c"), T_e);
    cfg.n_a = n.n_a;
    cfg.n_b = n.n_b;
    cfg.n_c = n.n_c;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

BareConfig to_bare(const ParameterSet& p) {
  BareConfig cfg;
  cfg.omega_a = p.get("omega_a");
  cfg.omega_b = p.get("omega_b");
  cfg.omega_c = p.get("omega_c");
  cfg.omega_d = p.get("omega_d");

  auto detuning = [&](std::string_view delta, const std::optional<double>& omega) {
    if (auto d = p.get(delta)) return *d;
    if (omega && cfg.omega_d) return *omega - *cfg.omega_d;
    return p.require(delta);
  };
  cfg.Delta_a = detuning("Delta_a", cfg.omega_a);
  cfg.Delta_b = detuning("Delta_b", cfg.omega_b);
  cfg.Delta_c = detuning("Delta_c", cfg.omega_c);

  cfg.K_b = p.get("K_b").value_or(0.0);
  cfg.K_c = p.get("K_c").value_or(0.0);
  cfg.G = p.get("G").value_or(0.0);
  cfg.g_ab = p.get("g_ab").value_or(0.0);
  cfg.gamma_a = p.require("gamma_a");
  cfg.gamma_b = p.require("gamma_b");
  cfg.gamma_c = p.require("gamma_c");
  cfg.Omega_b = p.get("Omega_b").value_or(0.0);
  cfg.Omega_c = p.get("Omega_c").value_or(0.0);
  cfg.T_e = p.get("T_e").value_or(0.0);
  return cfg;
}

double AxisSpec::value(std::size_t target, std::size_t index) const {
  const Target& t = targets.at(target);
  if (points < 2) return t.min;
  if (index + 1 == points) return t.max;
  const double frac = static_cast<double>(index) / static_cast<double>(points - 1);
  return t.min + frac * (t.max - t.min);
}

ConfigFile parse_config(std::string_view text) {
  ConfigFile out;
  std::map<int, PendingAxis> axes;
  std::map<std::string, std::size_t, std::less<>> seen;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (auto [it, inserted] = seen.emplace(std::string(key), line_no); !inserted) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) +
                        "' (first set on line " + std::to_string(it->second) + ")");
    }

    if (key == "mode") {
      out.mode = parse_mode(value);
      continue;
    }

    if (key.starts_with("sweep.axis")) {
      std::string_view rest = key.substr(10);
      const auto dot = rest.find('.');
      if (dot == std::string_view::npos || (rest.substr(0, dot) != "1" && rest.substr(0, dot) != "2")) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                          "' (sweep axes are sweep.axis1 and sweep.axis2)");
      }
      const int index = rest[0] - '0';
      const std::string_view field = rest.substr(dot + 1);
      PendingAxis& ax = axes[index];
      ax.line = line_no;
      if (field == "name") {
        for (auto n : split_list(value)) ax.names.emplace_back(n);
      } else if (field == "points") {
        const double pts = parse_double(value, line_no);
        if (pts != std::floor(pts) || pts < 0) {
          throw ConfigError("line " + std::to_string(line_no) + ": points must be a whole number");
        }
        ax.points = static_cast<std::size_t>(pts);
      } else if (field.starts_with("min_") || field.starts_with("max_")) {
        const std::string unit(field.substr(4));
        if (unit != "MHz" && unit != "nHz" && unit != "K") {
          throw ConfigError("line " + std::to_string(line_no) + ": unknown unit '" + unit + "'");
        }
        if (ax.unit && *ax.unit != unit) {
          throw ConfigError("line " + std::to_string(line_no) + ": min and max use different units");
        }
        ax.unit = unit;
        (field[1] == 'i' ? ax.min_raw : ax.max_raw) = std::string(value);
      } else {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    const auto us = key.rfind('_');
    const ParameterInfo* info =
        us == std::string_view::npos ? nullptr : find_parameter(key.substr(0, us));
    if (!info || key.substr(us + 1) != suffix(info->unit)) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    out.params.set(info->name, to_internal(info->unit, parse_double(value, line_no)));
  }

  for (const auto& [index, pending] : axes) {
    if (index == 2 && !axes.contains(1)) throw ConfigError("sweep.axis2 given without sweep.axis1");
    out.axes.push_back(finish_axis(pending, index));
  }
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_parameters(const ParameterSet& p) {
  std::string out;
  for (const ParameterInfo& info : known_parameters()) {
    const auto v = p.get(info.name);
    if (!v) continue;
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), to_file(info.unit, *v));
    out += std::string(info.name) + "_" + std::string(suffix(info.unit)) + " = " +
           std::string(buf.data(), res.ptr) + "\n";
  }
  return out;
}

}  // namespace cavmag
