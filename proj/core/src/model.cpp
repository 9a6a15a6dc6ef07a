#include "cavmag/model.hpp"

#include <cmath>

#include "cavmag/errors.hpp"
#include "cavmag/units.hpp"

namespace cavmag {

double thermal_occupancy(double omega, double T_e) {
  if (!(omega > 0.0)) throw InvalidArgument("thermal_occupancy: omega must be positive");
  if (!(T_e >= 0.0)) throw InvalidArgument("thermal_occupancy: T_e must be non-negative");
  if (T_e == 0.0) return 0.0;
  const double x = units::kHbar * omega / (units::kBoltzmann * T_e);
  return 1.0 / std::expm1(x);
}

Occupancies bath_occupancies(std::optional<double> omega_a, std::optional<double> omega_b,
                             std::optional<double> omega_c, double T_e) {
  if (T_e == 0.0) return {};
  auto one = [T_e](std::optional<double> w, const char* name) {
    if (!w) {
      throw InvalidArgument(std::string("bath_occupancies: ") + name +
                            " is required when T_e > 0");
    }
    return thermal_occupancy(*w, T_e);
  };
  return {one(omega_a, "omega_a"), one(omega_b, "omega_b"), one(omega_c, "omega_c")};
}

EffectiveConfig derive_effective(const BareConfig& bare, double nb2, double nc2) {
  if (!(nb2 >= 0.0) || !(nc2 >= 0.0)) {
    throw InvalidArgument("derive_effective: occupations |<b>|^2, |<c>|^2 must be non-negative");
  }
  const Occupancies n = bath_occupancies(bare.omega_a, bare.omega_b, bare.omega_c, bare.T_e);

  EffectiveConfig eff;
  eff.Delta_a = bare.Delta_a;
  eff.Delta_b_tilde = bare.Delta_b + 4.0 * bare.K_b * nb2 + bare.G * nc2;
  eff.Delta_c_tilde = bare.Delta_c + 4.0 * bare.K_c * nc2 + bare.G * nb2;
  eff.K_b_tilde = 2.0 * bare.K_b * nb2;
  eff.K_c_tilde = 2.0 * bare.K_c * nc2;
  eff.G_tilde = bare.G * std::sqrt(nb2 * nc2);
  eff.g_ab = bare.g_ab;
  eff.gamma_a = bare.gamma_a;
  eff.gamma_b = bare.gamma_b;
  eff.gamma_c = bare.gamma_c;
  eff.n_a = n.n_a;
  eff.n_b = n.n_b;
  eff.n_c = n.n_c;
  return eff;
}

namespace {

class Checker {
 public:
  void finite(const char* field, double v) {
    if (!std::isfinite(v)) out_.push_back({field, "must be finite"});
  }
  void positive(const char* field, double v) {
    if (!std::isfinite(v)) {
      out_.push_back({field, "must be finite"});
    } else if (!(v > 0.0)) {
      out_.push_back({field, "must be positive"});
    }
  }
  void non_negative(const char* field, double v) {
    if (!std::isfinite(v)) {
      out_.push_back({field, "must be finite"});
    } else if (!(v >= 0.0)) {
      out_.push_back({field, "must be non-negative"});
    }
  }
  void add(std::string field, std::string rule) { out_.push_back({std::move(field), std::move(rule)}); }

  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const BareConfig& cfg) {
  Checker c;
  c.finite("Delta_a", cfg.Delta_a);
  c.finite("Delta_b", cfg.Delta_b);
  c.finite("Delta_c", cfg.Delta_c);
  c.finite("K_b", cfg.K_b);
  c.finite("K_c", cfg.K_c);
  c.finite("G", cfg.G);
  c.finite("g_ab", cfg.g_ab);
  c.positive("gamma_a", cfg.gamma_a);
  c.positive("gamma_b", cfg.gamma_b);
  c.positive("gamma_c", cfg.gamma_c);
  c.finite("Omega_b", cfg.Omega_b);
  c.finite("Omega_c", cfg.Omega_c);
  c.non_negative("T_e", cfg.T_e);

  const struct {
    const char* omega_name;
    const char* delta_name;
    const std::optional<double>& omega;
    double delta;
  } modes[] = {{"omega_a", "Delta_a", cfg.omega_a, cfg.Delta_a},
               {"omega_b", "Delta_b", cfg.omega_b, cfg.Delta_b},
               {"omega_c", "Delta_c", cfg.omega_c, cfg.Delta_c}};
  for (const auto& m : modes) {
    if (m.omega) c.positive(m.omega_name, *m.omega);
  }
  if (cfg.omega_d) c.positive("omega_d", *cfg.omega_d);

  if (cfg.omega_d && std::isfinite(*cfg.omega_d)) {
    for (const auto& m : modes) {
      if (!m.omega || !std::isfinite(*m.omega)) continue;
      const double expected = *m.omega - *cfg.omega_d;
      const double tol = 1e-9 * std::max(std::abs(*m.omega), std::abs(*cfg.omega_d));
      if (std::abs(m.delta - expected) > tol) {
        c.add(m.delta_name, std::string("must equal ") + m.omega_name + " - omega_d");
      }
    }
  }

  if (cfg.T_e > 0.0) {
    for (const auto& m : modes) {
      if (!m.omega) c.add(m.omega_name, "is required when T_e > 0");
    }
  }
  return c.take();
}

std::vector<Violation> validate(const EffectiveConfig& cfg) {
  Checker c;
  c.finite("Delta_a", cfg.Delta_a);
  c.finite("Delta_b_tilde", cfg.Delta_b_tilde);
  c.finite("Delta_c_tilde", cfg.Delta_c_tilde);
  c.finite("K_b_tilde", cfg.K_b_tilde);
  c.finite("K_c_tilde", cfg.K_c_tilde);
  c.finite("G_tilde", cfg.G_tilde);
  c.finite("g_ab", cfg.g_ab);
  c.positive("gamma_a", cfg.gamma_a);
  c.positive("gamma_b", cfg.gamma_b);
  c.positive("gamma_c", cfg.gamma_c);
  c.non_negative("n_a", cfg.n_a);
  c.non_negative("n_b", cfg.n_b);
  c.non_negative("n_c", cfg.n_c);
  return c.take();
}

}  // namespace cavmag
