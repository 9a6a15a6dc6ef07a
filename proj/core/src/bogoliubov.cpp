#include "cavmag/bogoliubov.hpp"

#include <cmath>

#include "cavmag/errors.hpp"

namespace cavmag {

SqueezeFrame squeeze_frame(double delta_tilde, double k_tilde) {
  const double num = delta_tilde - k_tilde;
  const double den = delta_tilde + k_tilde;
  if (den == 0.0 || !(num / den > 0.0)) {
    throw DomainError("Bogoliubov frame undefined; |Delta_tilde| <= K_tilde");
  }
  SqueezeFrame f;
  f.C = num / den;
  f.theta = 0.25 * std::log(f.C);
  f.Delta_beta = std::sqrt(num * den);
  return f;
}

BogoliubovParams squeeze_params(const EffectiveConfig& cfg) {
  BogoliubovParams p;
  p.mode_b = squeeze_frame(cfg.Delta_b_tilde, cfg.K_b_tilde);
  p.mode_c = squeeze_frame(cfg.Delta_c_tilde, cfg.K_c_tilde);

  p.Delta_tilde = 0.5 * (cfg.Delta_b_tilde + cfg.Delta_c_tilde);
  p.K_tilde = 0.5 * (cfg.K_b_tilde + cfg.K_c_tilde);
  const SqueezeFrame sym = squeeze_frame(p.Delta_tilde, p.K_tilde);
  p.C = sym.C;
  p.theta = sym.theta;
  p.Delta_beta = sym.Delta_beta;
  p.G_script = cfg.G_tilde * std::sqrt(p.C);
  p.g_cos = cfg.g_ab * std::cosh(p.theta);
  p.g_sin = cfg.g_ab * std::sinh(p.theta);
  return p;
}

MatchingReport matching_report(const EffectiveConfig& cfg) {
  MatchingReport rep;
  rep.optima.push_back({"match_bc", -cfg.Delta_c_tilde});
  rep.optima.push_back({"match_b", -cfg.Delta_b_tilde});
  try {
    const BogoliubovParams p = squeeze_params(cfg);
    const double sign = p.Delta_tilde < 0.0 ? 1.0 : -1.0;
    rep.optima.push_back({"bogoliubov", sign * p.Delta_beta});
  } catch (const DomainError& e) {
    rep.note = std::string("bogoliubov entry omitted: ") + e.what();
  }
  return rep;
}

}  // namespace cavmag
