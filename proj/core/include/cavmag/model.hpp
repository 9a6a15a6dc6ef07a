#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cavmag {

/// Parameters of the driven three-mode Hamiltonian in the frame rotating at
/// the drive frequency. Mode a is the cavity, b the Kittel mode, c the
/// higher-order magnetostatic mode. All rates in rad/s.
struct BareConfig {
  // Lab-frame frequencies. Needed for thermal occupancies when T_e > 0 and
  // cross-checked against the detunings when present.
  std::optional<double> omega_a, omega_b, omega_c, omega_d;

  double Delta_a = 0.0;
  double Delta_b = 0.0;
  double Delta_c = 0.0;

  double K_b = 0.0;  // self-Kerr, rad/s per excitation
  double K_c = 0.0;
  double G = 0.0;    // cross-Kerr, rad/s per excitation

  double g_ab = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double gamma_c = 0.0;

  double Omega_b = 0.0;  // Rabi drive amplitudes
  double Omega_c = 0.0;

  double T_e = 0.0;  // Kelvin
};

/// Coefficients of the linearized fluctuation dynamics around a mean-field
/// steady state. The tilde quantities already include the Kerr shifts.
struct EffectiveConfig {
  double Delta_a = 0.0;
  double Delta_b_tilde = 0.0;
  double Delta_c_tilde = 0.0;
  double K_b_tilde = 0.0;
  double K_c_tilde = 0.0;
  double G_tilde = 0.0;
  double g_ab = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  double gamma_c = 0.0;
  double n_a = 0.0;  // bath occupancies
  double n_b = 0.0;
  double n_c = 0.0;
};

struct Violation {
  std::string field;
  std::string rule;

  std::string message() const { return field + " " + rule; }
  bool operator==(const Violation&) const = default;
};

/// Bose-Einstein occupancy 1/(exp(hbar omega / k_B T) - 1). Exactly zero at
/// T_e = 0. Throws InvalidArgument for omega <= 0 or T_e < 0.
double thermal_occupancy(double omega, double T_e);

struct Occupancies {
  double n_a = 0.0, n_b = 0.0, n_c = 0.0;
};

/// Occupancies of the three baths at the lab-frame mode frequencies. The
/// frequencies may be omitted only when T_e == 0.
Occupancies bath_occupancies(std::optional<double> omega_a, std::optional<double> omega_b,
                             std::optional<double> omega_c, double T_e);

/// Maps a bare configuration plus the mean excitation numbers |<b>|^2 and
/// |<c>|^2 onto the linearized coefficients. Amplitudes are taken real, so
/// G_tilde = G sqrt(nb2 nc2) and K_tilde = 2 K |<o>|^2.
EffectiveConfig derive_effective(const BareConfig& bare, double nb2, double nc2);

std::vector<Violation> validate(const BareConfig& cfg);
std::vector<Violation> validate(const EffectiveConfig& cfg);

}  // namespace cavmag
