#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cavmag/model.hpp"

namespace cavmag {

enum class Mode { effective, microscopic };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);  // throws ConfigError

/// Unit a parameter is written in on disk. Frequencies use 2 pi x MHz.
enum class Unit { MHz, nHz, K };

std::string_view suffix(Unit u);
double to_internal(Unit u, double file_value);
double to_file(Unit u, double internal_value);

struct ParameterInfo {
  std::string_view name;  // e.g. "Delta_b_tilde"
  Unit unit;
};

/// Every parameter recognised in config files, in canonical order.
std::span<const ParameterInfo> known_parameters();
const ParameterInfo* find_parameter(std::string_view name);

/// Named model parameters in internal units (rad/s, Kelvin). Both operating
/// modes read from the same set; each ignores the keys it does not use.
class ParameterSet {
 public:
  void set(std::string_view name, double internal_value);  // throws ConfigError on unknown name
  std::optional<double> get(std::string_view name) const;
  bool has(std::string_view name) const { return get(name).has_value(); }
  double require(std::string_view name) const;  // throws ConfigError when absent

  const std::map<std::string, double, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, double, std::less<>> values_;
};

/// Effective-mode view: the tilde coefficients are read directly and the bath
/// occupancies follow from omega_{a,b,c} and T_e.
EffectiveConfig to_effective(const ParameterSet& p);

/// Microscopic-mode view. Missing detunings are derived from omega_x - omega_d.
BareConfig to_bare(const ParameterSet& p);

/// One sweep axis. Several parameters may move together ("linked" axis); all
/// of them are interpolated linearly with the same index.
struct AxisSpec {
  struct Target {
    std::string name;
    double min = 0.0;  // internal units
    double max = 0.0;
  };
  std::vector<Target> targets;
  std::size_t points = 0;

  double value(std::size_t target, std::size_t index) const;
};

struct ConfigFile {
  ParameterSet params;
  std::optional<Mode> mode;
  std::vector<AxisSpec> axes;  // 0, 1 or 2 entries
};

/// Parses the flat `key = value` format. `#` starts a comment. Throws
/// ConfigError with the offending line number for malformed input.
ConfigFile parse_config(std::string_view text);
ConfigFile load_config(const std::string& path);

/// Serialises a parameter set back to the file format (canonical key order).
std::string format_parameters(const ParameterSet& p);

}  // namespace cavmag
