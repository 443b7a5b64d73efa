#include "bvsmc/posterior.hpp"

#include <cmath>

namespace bvsmc {

double log_posterior(const Dataset& data, const PriorSpec& prior,
                     const GammaVector& gamma, double temperature) {
  SuffStats s = SuffStats::build(data, prior.g, gamma);
  return temperature * s.log_marginal(data.n()) + log_model_prior(gamma, prior);
}

double log_posterior_from_stats(const Dataset& data, const PriorSpec& prior,
                                const SuffStats& stats, double temperature) {
  return temperature * stats.log_marginal(data.n()) +
         log_model_prior_size(data.p(), stats.p_gamma(), prior);
}

GUpdateResult update_g(const Dataset& data, PriorSpec& prior, const GammaVector& gamma,
                       SuffStats& stats, double temperature, Rng& rng, double step) {
  if (prior.g_mode != PriorSpec::GMode::kHalfCauchy)
    throw ConfigError("update_g requires a half-Cauchy prior on g");
  const double g_cur = prior.g;
  const double g_prop = g_cur * std::exp(step * rng.normal());
  const double u = rng.uniform_open();
  if (g_prop == g_cur) return {g_cur, true};  // step = 0 keeps the chain constant

  SuffStats prop_stats = SuffStats::build(data, g_prop, gamma);
  const double log_ratio =
      temperature * (prop_stats.log_marginal(data.n()) - stats.log_marginal(data.n())) +
      log_half_cauchy(g_prop, prior.g_scale) - log_half_cauchy(g_cur, prior.g_scale) +
      std::log(g_prop) - std::log(g_cur);  // Jacobian of the log-scale walk
  if (std::log(u) < log_ratio) {
    prior.g = g_prop;
    stats = std::move(prop_stats);
    return {g_prop, true};
  }
  return {g_cur, false};
}

}  // namespace bvsmc
