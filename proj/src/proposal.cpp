#include "bvsmc/proposal.hpp"

#include <cmath>

#include "bvsmc/errors.hpp"

namespace bvsmc {

double logit_eps(double x, double eps) {
  if (eps < 0.0 || eps >= 0.5) throw ConfigError("eps must lie in [0, 1/2)");
  if (x <= eps || x >= 1.0 - eps)
    throw ConfigError("logit_eps: argument outside (eps, 1-eps)");
  return std::log(x - eps) - std::log(1.0 - x - eps);
}

double inv_logit_eps(double y, double eps) {
  if (eps < 0.0 || eps >= 0.5) throw ConfigError("eps must lie in [0, 1/2)");
  double s;
  if (y >= 0.0) {
    s = 1.0 / (1.0 + std::exp(-y));
  } else {
    const double e = std::exp(y);
    s = e / (1.0 + e);
  }
  return eps + (1.0 - 2.0 * eps) * s;
}

ProposalParams ProposalParams::constant(int p, double a, double d, double eps) {
  ProposalParams params;
  params.a_probs = Eigen::VectorXd::Constant(p, a);
  params.d_probs = Eigen::VectorXd::Constant(p, d);
  params.eps = eps;
  params.thin_bound = a;
  return params;
}

void ProposalParams::rebuild_sparse_index(double threshold) {
  const int n = p();
  hot_mask.assign(n, 0);
  hot_adds.clear();
  double bound = 0.0;
  for (int j = 0; j < n; ++j) {
    if (a_probs[j] > threshold) {
      hot_mask[j] = 1;
      hot_adds.push_back(j);
    } else if (a_probs[j] > bound) {
      bound = a_probs[j];
    }
  }
  thin_bound = bound;
}

namespace {

constexpr int kSparseMinP = 1024;
constexpr double kSparseMaxBound = 0.05;

void sample_flips_dense(const ProposalParams& params, const GammaVector& gamma,
                        Rng& rng, FlipList& adds, FlipList& dels) {
  const int p = params.p();
  for (int j = 0; j < p; ++j) {
    const double u = rng.uniform();
    if (gamma.test(j)) {
      if (u < params.d_probs[j]) dels.push(j);
    } else {
      if (u < params.a_probs[j]) adds.push(j);
    }
  }
}

void sample_flips_sparse(const ProposalParams& params, const GammaVector& gamma,
                         Rng& rng, FlipList& adds, FlipList& dels) {
  const int p = params.p();
  const bool have_mask = !params.hot_mask.empty();
  // large-A coordinates, sampled one by one
  for (std::int32_t j : params.hot_adds)
    if (!gamma.test(j) && rng.uniform() < params.a_probs[j]) adds.push(j);

  // the rest by geometric skips, thinned to A_j / thin_bound
  const double bound = params.thin_bound;
  if (bound >= 1.0) {
    // no useful bound: finish the addition side coordinate by coordinate
    for (int j = 0; j < p; ++j) {
      if (have_mask && params.hot_mask[j]) continue;
      if (!gamma.test(j) && rng.uniform() < params.a_probs[j]) adds.push(j);
    }
  } else if (bound > 0.0) {
    const double log1m = std::log1p(-bound);
    std::int64_t j = -1;
    while (true) {
      const double u = rng.uniform_open();
      j += 1 + static_cast<std::int64_t>(std::floor(std::log(u) / log1m));
      if (j >= p) break;
      const int idx = static_cast<int>(j);
      if (have_mask && params.hot_mask[idx]) continue;
      if (!gamma.test(idx) && rng.uniform() * bound < params.a_probs[idx])
        adds.push(idx);
    }
  }
  for (std::int32_t idx : gamma.included())
    if (rng.uniform() < params.d_probs[idx]) dels.push(idx);
}

}  // namespace

void sample_flips(const ProposalParams& params, const GammaVector& gamma, Rng& rng,
                  FlipList& adds, FlipList& dels, SamplingMode mode) {
  adds.clear();
  dels.clear();
  bool sparse = mode == SamplingMode::kSparse;
  if (mode == SamplingMode::kAuto)
    sparse = params.p() >= kSparseMinP && params.thin_bound <= kSparseMaxBound &&
             static_cast<int>(params.hot_adds.size()) <= params.p() / 8;
  if (sparse)
    sample_flips_sparse(params, gamma, rng, adds, dels);
  else
    sample_flips_dense(params, gamma, rng, adds, dels);
}

GammaVector sample_proposal(const ProposalParams& params, const GammaVector& gamma,
                            Rng& rng, SamplingMode mode) {
  FlipList adds, dels;
  sample_flips(params, gamma, rng, adds, dels, mode);
  GammaVector out = gamma;
  for (std::size_t i = 0; i < dels.size(); ++i) out.clear(dels[i]);
  for (std::size_t i = 0; i < adds.size(); ++i) out.set(adds[i]);
  return out;
}

double log_proposal_prob(const ProposalParams& params, const GammaVector& from,
                         const GammaVector& to) {
  if (from.p() != to.p() || from.p() != params.p())
    throw ConfigError("log_proposal_prob: dimension mismatch");
  double total = 0.0;
  for (int j = 0; j < from.p(); ++j) {
    if (from.test(j))
      total += to.test(j) ? std::log1p(-params.d_probs[j]) : std::log(params.d_probs[j]);
    else
      total += to.test(j) ? std::log(params.a_probs[j]) : std::log1p(-params.a_probs[j]);
  }
  return total;
}

double log_proposal_ratio(const ProposalParams& params, const FlipList& adds,
                          const FlipList& dels) {
  double r = 0.0;
  for (std::size_t i = 0; i < adds.size(); ++i) {
    const int j = adds[i];
    r += std::log(params.d_probs[j]) - std::log(params.a_probs[j]);
  }
  for (std::size_t i = 0; i < dels.size(); ++i) {
    const int j = dels[i];
    r += std::log(params.a_probs[j]) - std::log(params.d_probs[j]);
  }
  return r;
}

double acceptance_prob(double log_post_from, double log_post_to, double log_q_fwd,
                       double log_q_rev) {
  const double log_ratio = log_post_to - log_post_from + log_q_rev - log_q_fwd;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace bvsmc
