#ifndef BVSMC_PRIOR_HPP_
#define BVSMC_PRIOR_HPP_

#include "bvsmc/errors.hpp"
#include "bvsmc/gamma_vector.hpp"

namespace bvsmc {

// Prior specification. The coefficient prior is N(0, sigma^2 g I) on the
// included coefficients with a flat intercept and p(sigma^2) ~ 1/sigma^2,
// all marginalized analytically; only g and the model prior need runtime
// state. g is either fixed or given a half-Cauchy hyperprior; the model
// prior is i.i.d. Bernoulli(h) or Beta-binomial via h ~ Beta(a, b).
struct PriorSpec {
  enum class GMode { kFixed, kHalfCauchy };
  enum class HMode { kFixed, kBeta };

  GMode g_mode = GMode::kFixed;
  double g = 9.0;              // fixed value, or current value under half-Cauchy
  double g_scale = 1.0;        // half-Cauchy scale
  HMode h_mode = HMode::kFixed;
  double h = 0.5;
  double beta_a = 1.0, beta_b = 1.0;

  static PriorSpec fixed(double g, double h) {
    PriorSpec s;
    s.g = g;
    s.h = h;
    s.validate();
    return s;
  }
  static PriorSpec beta_binomial(double g, double a, double b) {
    PriorSpec s;
    s.g = g;
    s.h_mode = HMode::kBeta;
    s.beta_a = a;
    s.beta_b = b;
    s.validate();
    return s;
  }

  PriorSpec with_g(double new_g) const {
    PriorSpec s = *this;
    s.g = new_g;
    return s;
  }

  void validate() const {
    if (g <= 0.0) throw ConfigError("g must be positive");
    if (g_mode == GMode::kHalfCauchy && g_scale <= 0.0)
      throw ConfigError("half-Cauchy scale must be positive");
    if (h_mode == HMode::kFixed && (h <= 0.0 || h >= 1.0))
      throw ConfigError("h must lie in (0,1)");
    if (h_mode == HMode::kBeta && (beta_a <= 0.0 || beta_b <= 0.0))
      throw ConfigError("Beta(a,b) parameters must be positive");
  }
};

// log p(gamma): h^{p_g}(1-h)^{p-p_g} for fixed h, or the Beta-binomial
// marginal B(a+p_g, b+p-p_g)/B(a,b) when h ~ Beta(a,b).
double log_model_prior(const GammaVector& gamma, const PriorSpec& prior);

// Same quantity from the model size alone; used on proposals that are
// never materialized as a GammaVector.
double log_model_prior_size(int p, int p_gamma, const PriorSpec& prior);

// Prior inclusion weight of variable j given the rest of the model,
// as used inside the Rao-Blackwellised conditionals: h when h is fixed,
// (#gamma_{-j} + 1 + a) / (p + a + b) under Beta(a, b), where
// #gamma_{-j} counts the included variables other than j.
double conditional_h(int p, int n_included_others, const PriorSpec& prior);

// log of the half-Cauchy density on (0, inf) with the given scale.
double log_half_cauchy(double g, double scale);

}  // namespace bvsmc

#endif  // BVSMC_PRIOR_HPP_
