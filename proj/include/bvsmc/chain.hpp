#ifndef BVSMC_CHAIN_HPP_
#define BVSMC_CHAIN_HPP_

#include <cstdint>

#include "bvsmc/dataset.hpp"
#include "bvsmc/gamma_vector.hpp"
#include "bvsmc/posterior.hpp"
#include "bvsmc/prior.hpp"
#include "bvsmc/proposal.hpp"
#include "bvsmc/rng.hpp"
#include "bvsmc/suffstats.hpp"

namespace bvsmc {

// Everything one Metropolis-Hastings step did.
struct StepRecord {
  double accept_prob = 0.0;
  bool accepted = false;
  bool attempted = true;   // false when an impossible swap was drawn (ADS no-op)
  bool numeric_reject = false;
  int n_proposed = 0;      // coordinates proposed to change
  FlipList adds;           // proposed 0 -> 1 (gamma^A)
  FlipList dels;           // proposed 1 -> 0 (gamma^D)
};

// One MCMC chain on the model space: the inclusion vector, its sufficient
// statistics, the cached log posterior at this chain's temperature, and a
// private RNG stream. Holds its own PriorSpec copy so a random g can
// evolve per chain.
class Chain {
 public:
  Chain(const Dataset& data, PriorSpec prior, double temperature, GammaVector init,
        Rng rng, bool rank_guard = true, int temperature_index = 0);

  const GammaVector& gamma() const { return gamma_; }
  const SuffStats& stats() const { return stats_; }
  double log_post() const { return log_post_; }
  double log_marginal() const { return stats_.log_marginal(data_->n()); }
  double temperature() const { return temperature_; }
  int temperature_index() const { return temperature_index_; }
  PriorSpec& prior() { return prior_; }
  const PriorSpec& prior() const { return prior_; }
  Rng& rng() { return rng_; }
  CrossCache& cache() { return cache_; }
  const Dataset& data() const { return *data_; }

  // Product-form proposal step with the given parameters.
  StepRecord mh_step(const ProposalParams& params,
                     SamplingMode mode = SamplingMode::kAuto);

  // Add-delete-swap baseline step.
  StepRecord ads_step();

  // Random-walk step on log g (half-Cauchy prior); rebuilds statistics on
  // acceptance.
  GUpdateResult g_step(double step);

  // Rao-Blackwell row of the current state.
  int rb_row(const PriorSpec& prior, Eigen::VectorXd& out) {
    return stats_.rao_blackwell_row(*data_, cache_, prior, rb_ws_, out);
  }

  // From-scratch rebuild of statistics and log posterior. Returns the
  // absolute drift |cached - recomputed| of the log posterior.
  double rebuild();

  // Exchange model state with another chain (parallel tempering swap);
  // both log posteriors are recomputed at their own temperatures.
  void swap_state_with(Chain& other);

  // Ladder adaptation moves this chain's temperature.
  void set_temperature(double t) {
    temperature_ = t;
    log_post_ = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
  }

  // Install a new g with statistics already rebuilt for it (replica-wide
  // g moves under parallel tempering).
  void set_g_and_stats(double g, SuffStats stats) {
    prior_.g = g;
    stats_ = std::move(stats);
    log_post_ = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
  }

  std::int64_t numeric_rejects() const { return numeric_rejects_; }
  double max_rebuild_drift() const { return max_rebuild_drift_; }
  std::int64_t rb_warnings() const { return rb_warnings_; }
  void add_rb_warnings(int w) { rb_warnings_ += w; }

 private:
  // Applies dels then adds to scratch_ and finishes the MH decision.
  void evaluate_and_decide(const ProposalParams* params, double extra_log_ratio,
                           StepRecord& rec, double u);

  const Dataset* data_;
  PriorSpec prior_;
  double temperature_;
  int temperature_index_;
  bool rank_guard_;
  GammaVector gamma_;
  SuffStats stats_, scratch_;
  CrossCache cache_;
  Rng rng_;
  double log_post_;
  std::int64_t accepted_since_rebuild_ = 0;
  std::int64_t numeric_rejects_ = 0;
  std::int64_t rb_warnings_ = 0;
  double max_rebuild_drift_ = 0.0;
  RbWorkspace rb_ws_;

  static constexpr std::int64_t kRebuildEvery = 1000;
};

}  // namespace bvsmc

#endif  // BVSMC_CHAIN_HPP_
