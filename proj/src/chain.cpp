#include "bvsmc/chain.hpp"

#include <cmath>

#include "bvsmc/errors.hpp"

namespace bvsmc {

Chain::Chain(const Dataset& data, PriorSpec prior, double temperature, GammaVector init,
             Rng rng, bool rank_guard, int temperature_index)
    : data_(&data),
      prior_(std::move(prior)),
      temperature_(temperature),
      temperature_index_(temperature_index),
      rank_guard_(rank_guard),
      gamma_(std::move(init)),
      cache_(data),
      rng_(rng) {
  stats_ = SuffStats::build(data, prior_.g, gamma_);
  cache_.note_model_size(gamma_.count());
  log_post_ = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
}

void Chain::evaluate_and_decide(const ProposalParams* params, double extra_log_ratio,
                                StepRecord& rec, double u) {
  const int pg_new = stats_.p_gamma() - static_cast<int>(rec.dels.size()) +
                     static_cast<int>(rec.adds.size());
  if (rank_guard_ && pg_new > data_->n() - 2) {
    rec.accept_prob = 0.0;  // outside the supported model space
    return;
  }

  scratch_.assign_from(stats_);
  try {
    // removals first keeps the working dimension minimal
    for (std::size_t i = 0; i < rec.dels.size(); ++i) scratch_.remove_column(rec.dels[i]);
    for (std::size_t i = 0; i < rec.adds.size(); ++i)
      scratch_.add_column(*data_, cache_, rec.adds[i]);
  } catch (const NumericalError&) {
    rec.numeric_reject = true;
    ++numeric_rejects_;
    rec.accept_prob = 0.0;
    return;
  }

  const double log_post_new =
      temperature_ * scratch_.log_marginal(data_->n()) +
      log_model_prior_size(data_->p(), pg_new, prior_);
  const double log_q_ratio =
      (params != nullptr ? log_proposal_ratio(*params, rec.adds, rec.dels) : 0.0) +
      extra_log_ratio;
  rec.accept_prob = acceptance_prob(log_post_, log_post_new, 0.0, log_q_ratio);

  if (u < rec.accept_prob) {
    rec.accepted = true;
    std::swap(stats_, scratch_);
    for (std::size_t i = 0; i < rec.dels.size(); ++i) gamma_.clear(rec.dels[i]);
    for (std::size_t i = 0; i < rec.adds.size(); ++i) gamma_.set(rec.adds[i]);
    log_post_ = log_post_new;
    if (++accepted_since_rebuild_ >= kRebuildEvery) rebuild();
  }
}

StepRecord Chain::mh_step(const ProposalParams& params, SamplingMode mode) {
  StepRecord rec;
  sample_flips(params, gamma_, rng_, rec.adds, rec.dels, mode);
  rec.n_proposed = static_cast<int>(rec.adds.size() + rec.dels.size());
  const double u = rng_.uniform();
  if (rec.n_proposed == 0) {
    rec.accept_prob = 1.0;  // identity move
    rec.accepted = true;
    return rec;
  }
  evaluate_and_decide(&params, 0.0, rec, u);
  return rec;
}

StepRecord Chain::ads_step() {
  StepRecord rec;
  const int p = data_->p();
  const int pg = gamma_.count();
  const bool add_delete = rng_.uniform() < 0.5;
  if (add_delete) {
    const int j = static_cast<int>(rng_.uniform_int(p));
    if (gamma_.test(j))
      rec.dels.push(j);
    else
      rec.adds.push(j);
  } else {
    if (pg == 0 || pg == p) {
      rec.attempted = false;  // no swap available from an empty or full model
      return rec;
    }
    const int k = gamma_.included()[rng_.uniform_int(pg)];
    int target = static_cast<int>(rng_.uniform_int(p - pg));
    int j = -1;
    for (int idx = 0; idx < p; ++idx) {
      if (!gamma_.test(idx) && target-- == 0) {
        j = idx;
        break;
      }
    }
    rec.dels.push(k);
    rec.adds.push(j);
  }
  rec.n_proposed = static_cast<int>(rec.adds.size() + rec.dels.size());
  const double u = rng_.uniform();
  // both move types are symmetric: add/delete picks j uniformly in either
  // direction, and a swap preserves the model size
  evaluate_and_decide(nullptr, 0.0, rec, u);
  return rec;
}

GUpdateResult Chain::g_step(double step) {
  GUpdateResult res = update_g(*data_, prior_, gamma_, stats_, temperature_, rng_, step);
  if (res.accepted)
    log_post_ = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
  return res;
}

double Chain::rebuild() {
  stats_ = SuffStats::build(*data_, prior_.g, gamma_);
  const double fresh = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
  const double drift = std::abs(fresh - log_post_);
  if (drift > max_rebuild_drift_) max_rebuild_drift_ = drift;
  log_post_ = fresh;
  accepted_since_rebuild_ = 0;
  return drift;
}

void Chain::swap_state_with(Chain& other) {
  std::swap(gamma_, other.gamma_);
  std::swap(stats_, other.stats_);
  log_post_ = log_posterior_from_stats(*data_, prior_, stats_, temperature_);
  other.log_post_ =
      log_posterior_from_stats(*other.data_, other.prior_, other.stats_, other.temperature_);
}

}  // namespace bvsmc
