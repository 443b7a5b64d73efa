#ifndef BVSMC_IDEALIZED_HPP_
#define BVSMC_IDEALIZED_HPP_

#include <Eigen/Dense>
#include <vector>

#include "bvsmc/chain.hpp"
#include "bvsmc/dataset.hpp"
#include "bvsmc/prior.hpp"
#include "bvsmc/proposal.hpp"
#include "bvsmc/rng.hpp"

namespace bvsmc {

// Independent-coordinate binary target pi(gamma) = prod_j pi_j^{gamma_j}
// (1-pi_j)^{1-gamma_j}; the idealized posterior the samplers are tuned
// against.
struct ProductTarget {
  Eigen::VectorXd pis;

  explicit ProductTarget(Eigen::VectorXd p);
  int p() const { return static_cast<int>(pis.size()); }
  double log_mass(const GammaVector& gamma) const;
};

enum class IdealVariant { kIndependent, kRandomWalk };

// The two proposal choices that accept every move on a product target:
// independent (A_j = pi_j, D_j = 1 - pi_j) and random walk
// (A_j = min{1, pi_j/(1-pi_j)}, D_j = min{1, (1-pi_j)/pi_j}). Returned
// unclamped (eps = 0).
ProposalParams ideal_independent_params(const ProductTarget& target);
ProposalParams ideal_rw_params(const ProductTarget& target);
ProposalParams ideal_params(const ProductTarget& target, IdealVariant variant);

// Expected squared jumping distance at stationarity:
// 2 sum pi_j (1-pi_j) for independent, 2 sum min{pi_j, 1-pi_j} for the
// random walk (the maximal value).
double esjd_closed_form(const ProductTarget& target, IdealVariant variant);

// CLT asymptotic variance of f(gamma) = a_0 + sum_j a_j f_j(gamma_j),
// given the per-coordinate stationary variances Var_{pi^(j)} f_j:
// sum a_j^2 v_j for independent, sum (2 max{pi_j, 1-pi_j} - 1) a_j^2 v_j
// for the random walk.
double asym_var_linear(const ProductTarget& target, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& coord_vars, IdealVariant variant);

// Probability that an iteration accepts a move changing the model:
// 1 - prod[(1-pi_j)^2 + pi_j^2] (independent), 1 - prod|2 pi_j - 1| (RW).
double mutation_rate_closed_form(const ProductTarget& target, IdealVariant variant);

// Exact stationary draw.
GammaVector sample_stationary(const ProductTarget& target, Rng& rng);

// MH chain on the product target, driven by the same proposal and
// acceptance path as the posterior samplers.
class ProductChain {
 public:
  ProductChain(const ProductTarget& target, GammaVector init, Rng rng);
  const GammaVector& gamma() const { return gamma_; }
  double log_post() const { return log_post_; }
  Rng& rng() { return rng_; }
  StepRecord mh_step(const ProposalParams& params,
                     SamplingMode mode = SamplingMode::kAuto);

 private:
  const ProductTarget* target_;
  GammaVector gamma_;
  Rng rng_;
  double log_post_;
  Eigen::VectorXd logit_;  // log pi_j - log(1 - pi_j)
};

// Full enumeration of the 2^p model posterior; the exact oracle for the
// samplers. Hard-capped at p <= 20.
struct EnumerationResult {
  Eigen::VectorXd pips;
  std::vector<double> log_prob;  // normalized log posterior, indexed by bitmask
  double log_evidence = 0.0;     // log sum_gamma m(gamma) p(gamma)
};
EnumerationResult enumerate_posterior(const Dataset& data, const PriorSpec& prior);

// log of a = BF_j(gamma_k = 1, gamma_0) / BF_j(gamma_k = 0, gamma_0); the
// posterior-dependence diagnostic (a near 1 means gamma_j and gamma_k are
// approximately independent a posteriori).
double pairwise_bf_ratio(const Dataset& data, const PriorSpec& prior, int j, int k,
                         const GammaVector& gamma0);

}  // namespace bvsmc

#endif  // BVSMC_IDEALIZED_HPP_
