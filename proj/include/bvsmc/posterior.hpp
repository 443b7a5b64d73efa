#ifndef BVSMC_POSTERIOR_HPP_
#define BVSMC_POSTERIOR_HPP_

#include "bvsmc/dataset.hpp"
#include "bvsmc/gamma_vector.hpp"
#include "bvsmc/prior.hpp"
#include "bvsmc/rng.hpp"
#include "bvsmc/suffstats.hpp"

namespace bvsmc {

// t * log m(gamma) + log p(gamma); t = 1 is the untempered posterior,
// t < 1 the flattened target used by parallel tempering.
double log_posterior(const Dataset& data, const PriorSpec& prior,
                     const GammaVector& gamma, double temperature = 1.0);

// Same, from statistics already built for gamma.
double log_posterior_from_stats(const Dataset& data, const PriorSpec& prior,
                                const SuffStats& stats, double temperature);

struct GUpdateResult {
  double g = 0.0;
  bool accepted = false;
};

// One random-walk Metropolis-Hastings step on log g under the half-Cauchy
// hyperprior. On acceptance the sufficient statistics are rebuilt from
// scratch (the ridge term scales with 1/g, so no cheap update exists) and
// prior.g is replaced.
GUpdateResult update_g(const Dataset& data, PriorSpec& prior, const GammaVector& gamma,
                       SuffStats& stats, double temperature, Rng& rng, double step);

}  // namespace bvsmc

#endif  // BVSMC_POSTERIOR_HPP_
