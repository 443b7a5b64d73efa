#include "bvsmc/prior.hpp"

#include <cmath>

namespace bvsmc {

namespace {
double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double log_model_prior_size(int p, int p_gamma, const PriorSpec& prior) {
  if (prior.h_mode == PriorSpec::HMode::kFixed) {
    return p_gamma * std::log(prior.h) + (p - p_gamma) * std::log1p(-prior.h);
  }
  return log_beta(prior.beta_a + p_gamma, prior.beta_b + p - p_gamma) -
         log_beta(prior.beta_a, prior.beta_b);
}

double log_model_prior(const GammaVector& gamma, const PriorSpec& prior) {
  return log_model_prior_size(gamma.p(), gamma.count(), prior);
}

double conditional_h(int p, int n_included_others, const PriorSpec& prior) {
  if (prior.h_mode == PriorSpec::HMode::kFixed) return prior.h;
  return (n_included_others + 1.0 + prior.beta_a) / (p + prior.beta_a + prior.beta_b);
}

double log_half_cauchy(double g, double scale) {
  if (g <= 0.0) return -std::numeric_limits<double>::infinity();
  const double r = g / scale;
  return std::log(2.0 / (kPi * scale)) - std::log1p(r * r);
}

}  // namespace bvsmc
