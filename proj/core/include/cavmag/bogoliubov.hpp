#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavmag/model.hpp"

namespace cavmag {

/// Squeezing-frame quantities for one (Delta_tilde, K_tilde) pair.
struct SqueezeFrame {
  double C = 1.0;        // (Delta - K) / (Delta + K)
  double theta = 0.0;    // ln(C) / 4
  double Delta_beta = 0.0;  // sqrt(Delta^2 - K^2), non-negative
};

/// Bogoliubov-frame parameters. The headline fields use the detuning and
/// self-Kerr averaged over the two magnon modes; `mode_b` and `mode_c` keep
/// the per-mode values.
struct BogoliubovParams {
  double Delta_tilde = 0.0;  // symmetrised
  double K_tilde = 0.0;      // symmetrised
  double theta = 0.0;
  double C = 1.0;
  double Delta_beta = 0.0;
  double G_script = 0.0;  // G_tilde sqrt(C)
  double g_cos = 0.0;     // g_ab cosh(theta)
  double g_sin = 0.0;     // g_ab sinh(theta)
  SqueezeFrame mode_b;
  SqueezeFrame mode_c;
};

/// Throws DomainError when (Delta - K)/(Delta + K) <= 0, i.e. |Delta| <= |K|.
SqueezeFrame squeeze_frame(double delta_tilde, double k_tilde);

/// Throws DomainError if either the symmetrised or a per-mode frame is undefined.
BogoliubovParams squeeze_params(const EffectiveConfig& cfg);

struct NamedDetuning {
  std::string name;
  double value = 0.0;  // rad/s
};

struct MatchingReport {
  std::vector<NamedDetuning> optima;  // match_bc, match_b, bogoliubov (when defined)
  std::optional<std::string> note;
};

/// Cavity detunings expected to maximise the cavity-magnon entanglement:
/// -Delta_c_tilde, -Delta_b_tilde and the Bogoliubov-shifted value, which is
/// +Delta_beta for a red-detuned drive (Delta_tilde < 0) and -Delta_beta otherwise.
MatchingReport matching_report(const EffectiveConfig& cfg);

}  // namespace cavmag
