#ifndef BVSMC_PROPOSAL_HPP_
#define BVSMC_PROPOSAL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bvsmc/gamma_vector.hpp"
#include "bvsmc/rng.hpp"

namespace bvsmc {

// logit_eps(x) = log(x - eps) - log(1 - x - eps), a bijection from
// (eps, 1-eps) onto the reals; eps = 0 recovers the plain logit.
double logit_eps(double x, double eps);
double inv_logit_eps(double y, double eps);

// Per-variable proposal probabilities: an excluded variable j is proposed
// for inclusion with probability a_probs[j], an included one for deletion
// with probability d_probs[j]. All entries lie in [eps, 1-eps].
//
// The sparse-sampling index splits the addition side in two: coordinates
// flagged in hot_mask (collected in hot_adds) carry a large A_j and are
// sampled directly; every other coordinate satisfies A_j <= thin_bound
// and is reached by geometric-skip thinning. With an empty mask,
// thin_bound must bound every A_j.
struct ProposalParams {
  Eigen::VectorXd a_probs;
  Eigen::VectorXd d_probs;
  double eps = 0.0;
  double thin_bound = 1.0;
  std::vector<std::int32_t> hot_adds;
  std::vector<std::uint8_t> hot_mask;

  static constexpr double kHotThreshold = 0.05;

  static ProposalParams constant(int p, double a, double d, double eps = 0.0);

  // Exact rebuild: hot set = {j : A_j > threshold}, thin_bound = the
  // maximum A over the remaining coordinates.
  void rebuild_sparse_index(double threshold = kHotThreshold);

  // Keep the index valid after raising A_j (expands the hot set; never
  // loosens thin_bound).
  void note_a_raised(int j) {
    if (!hot_mask.empty() && !hot_mask[j] && a_probs[j] > thin_bound) {
      hot_mask[j] = 1;
      hot_adds.push_back(j);
    }
  }

  int p() const { return static_cast<int>(a_probs.size()); }
};

enum class SamplingMode { kAuto, kDense, kSparse };

// Indices proposed to flip in one direction. Stays inline up to 64
// entries; larger proposals spill to the heap.
class FlipList {
 public:
  void clear() {
    n_inline_ = 0;
    spill_.clear();
  }
  void push(std::int32_t j) {
    if (n_inline_ < kInline)
      inline_[n_inline_++] = j;
    else
      spill_.push_back(j);
  }
  std::size_t size() const { return n_inline_ + spill_.size(); }
  bool empty() const { return n_inline_ == 0 && spill_.empty(); }
  std::int32_t operator[](std::size_t i) const {
    return i < n_inline_ ? inline_[i] : spill_[i - n_inline_];
  }

 private:
  static constexpr std::size_t kInline = 64;
  std::size_t n_inline_ = 0;
  std::int32_t inline_[kInline];
  std::vector<std::int32_t> spill_;
};

// Draw the coordinate flips of one proposal: every excluded j flips on
// independently with probability A_j, every included j flips off with
// probability D_j. The dense path draws one uniform per coordinate. The
// sparse path visits excluded coordinates by geometric skips under the
// bound add_bound and thins each candidate by A_j / add_bound, which
// realizes the same product-Bernoulli law in O(p * add_bound + p_gamma)
// expected work; it is selected automatically at large p when the bound
// is small.
void sample_flips(const ProposalParams& params, const GammaVector& gamma, Rng& rng,
                  FlipList& adds, FlipList& dels,
                  SamplingMode mode = SamplingMode::kAuto);

GammaVector sample_proposal(const ProposalParams& params, const GammaVector& gamma,
                            Rng& rng, SamplingMode mode = SamplingMode::kAuto);

// log q_eta(from -> to) summed over all p coordinates.
double log_proposal_prob(const ProposalParams& params, const GammaVector& from,
                         const GammaVector& to);

// log q(to -> from) - log q(from -> to) from the flip lists alone; the
// untouched coordinates cancel exactly.
double log_proposal_ratio(const ProposalParams& params, const FlipList& adds,
                          const FlipList& dels);

// min{1, exp(log_post_to - log_post_from + log_q_rev - log_q_fwd)}.
double acceptance_prob(double log_post_from, double log_post_to, double log_q_fwd,
                       double log_q_rev);

}  // namespace bvsmc

#endif  // BVSMC_PROPOSAL_HPP_
