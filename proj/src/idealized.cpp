#include "bvsmc/idealized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvsmc/errors.hpp"

namespace bvsmc {

ProductTarget::ProductTarget(Eigen::VectorXd p) : pis(std::move(p)) {
  for (int j = 0; j < pis.size(); ++j)
    if (!(pis[j] > 0.0 && pis[j] < 1.0))
      throw ConfigError("product target requires 0 < pi_j < 1");
}

double ProductTarget::log_mass(const GammaVector& gamma) const {
  double s = 0.0;
  for (int j = 0; j < p(); ++j)
    s += gamma.test(j) ? std::log(pis[j]) : std::log1p(-pis[j]);
  return s;
}

ProposalParams ideal_independent_params(const ProductTarget& target) {
  ProposalParams params;
  params.eps = 0.0;
  params.a_probs = target.pis;
  params.d_probs = (1.0 - target.pis.array()).matrix();
  params.rebuild_sparse_index();
  return params;
}

ProposalParams ideal_rw_params(const ProductTarget& target) {
  const int p = target.p();
  ProposalParams params;
  params.eps = 0.0;
  params.a_probs.resize(p);
  params.d_probs.resize(p);
  for (int j = 0; j < p; ++j) {
    const double pi = target.pis[j];
    params.a_probs[j] = std::min(1.0, pi / (1.0 - pi));
    params.d_probs[j] = std::min(1.0, (1.0 - pi) / pi);
  }
  params.rebuild_sparse_index();
  return params;
}

ProposalParams ideal_params(const ProductTarget& target, IdealVariant variant) {
  return variant == IdealVariant::kIndependent ? ideal_independent_params(target)
                                               : ideal_rw_params(target);
}

double esjd_closed_form(const ProductTarget& target, IdealVariant variant) {
  const auto& pi = target.pis.array();
  if (variant == IdealVariant::kIndependent) return 2.0 * (pi * (1.0 - pi)).sum();
  return 2.0 * pi.min(1.0 - pi).sum();
}

double asym_var_linear(const ProductTarget& target, const Eigen::VectorXd& weights,
                       const Eigen::VectorXd& coord_vars, IdealVariant variant) {
  if (weights.size() != target.p() || coord_vars.size() != target.p())
    throw ConfigError("asym_var_linear: dimension mismatch");
  double s = 0.0;
  for (int j = 0; j < target.p(); ++j) {
    const double lazy =
        variant == IdealVariant::kIndependent
            ? 1.0
            : 2.0 * std::max(target.pis[j], 1.0 - target.pis[j]) - 1.0;
    s += lazy * weights[j] * weights[j] * coord_vars[j];
  }
  return s;
}

double mutation_rate_closed_form(const ProductTarget& target, IdealVariant variant) {
  double prod = 1.0;
  for (int j = 0; j < target.p(); ++j) {
    const double pi = target.pis[j];
    prod *= variant == IdealVariant::kIndependent
                ? (1.0 - pi) * (1.0 - pi) + pi * pi
                : std::abs(2.0 * pi - 1.0);
  }
  return 1.0 - prod;
}

GammaVector sample_stationary(const ProductTarget& target, Rng& rng) {
  GammaVector gamma(target.p());
  for (int j = 0; j < target.p(); ++j)
    if (rng.uniform() < target.pis[j]) gamma.set(j);
  return gamma;
}

ProductChain::ProductChain(const ProductTarget& target, GammaVector init, Rng rng)
    : target_(&target), gamma_(std::move(init)), rng_(rng) {
  log_post_ = target_->log_mass(gamma_);
  logit_ = (target_->pis.array().log() - (1.0 - target_->pis.array()).log()).matrix();
}

StepRecord ProductChain::mh_step(const ProposalParams& params, SamplingMode mode) {
  StepRecord rec;
  sample_flips(params, gamma_, rng_, rec.adds, rec.dels, mode);
  rec.n_proposed = static_cast<int>(rec.adds.size() + rec.dels.size());
  const double u = rng_.uniform();
  if (rec.n_proposed == 0) {
    rec.accept_prob = 1.0;
    rec.accepted = true;
    return rec;
  }
  double dmass = 0.0;
  for (std::size_t i = 0; i < rec.adds.size(); ++i) dmass += logit_[rec.adds[i]];
  for (std::size_t i = 0; i < rec.dels.size(); ++i) dmass -= logit_[rec.dels[i]];
  const double lr = log_proposal_ratio(params, rec.adds, rec.dels);
  rec.accept_prob = acceptance_prob(0.0, dmass, 0.0, lr);
  if (u < rec.accept_prob) {
    rec.accepted = true;
    for (std::size_t i = 0; i < rec.dels.size(); ++i) gamma_.clear(rec.dels[i]);
    for (std::size_t i = 0; i < rec.adds.size(); ++i) gamma_.set(rec.adds[i]);
    log_post_ += dmass;
  }
  return rec;
}

EnumerationResult enumerate_posterior(const Dataset& data, const PriorSpec& prior) {
  const int p = data.p();
  if (p > 20) throw ConfigError("enumerate_posterior capped at p <= 20");
  const std::size_t n_models = std::size_t{1} << p;

  EnumerationResult res;
  res.log_prob.resize(n_models);

  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < n_models; ++mask) {
    GammaVector gamma(p);
    for (int j = 0; j < p; ++j)
      if (mask & (std::size_t{1} << j)) gamma.set(j);
    const double lm = log_marginal_likelihood(data, prior, gamma).first;
    res.log_prob[mask] = lm + log_model_prior(gamma, prior);
    if (res.log_prob[mask] > max_log) max_log = res.log_prob[mask];
  }

  double total = 0.0;
  for (double lp : res.log_prob) total += std::exp(lp - max_log);
  res.log_evidence = max_log + std::log(total);
  for (double& lp : res.log_prob) lp -= res.log_evidence;

  res.pips = Eigen::VectorXd::Zero(p);
  for (std::size_t mask = 0; mask < n_models; ++mask) {
    const double prob = std::exp(res.log_prob[mask]);
    for (int j = 0; j < p; ++j)
      if (mask & (std::size_t{1} << j)) res.pips[j] += prob;
  }
  return res;
}

double pairwise_bf_ratio(const Dataset& data, const PriorSpec& prior, int j, int k,
                         const GammaVector& gamma0) {
  if (j == k) throw ConfigError("pairwise_bf_ratio requires j != k");
  if (gamma0.test(j) || gamma0.test(k))
    throw ConfigError("pairwise_bf_ratio: gamma0 must exclude j and k");

  CrossCache cache(data);
  SuffStats base = SuffStats::build(data, prior.g, gamma0);
  const double bf_k0 = base.log_bf_up(data, cache, j);

  GammaVector with_k = gamma0;
  with_k.set(k);
  SuffStats upper = SuffStats::build(data, prior.g, with_k);
  const double bf_k1 = upper.log_bf_up(data, cache, j);
  return bf_k1 - bf_k0;
}

}  // namespace bvsmc
