#ifndef BVSMC_ADAPT_HPP_
#define BVSMC_ADAPT_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "bvsmc/proposal.hpp"

namespace bvsmc {

// Robbins-Monro style step sizes phi_i = c * i^{-lambda}, 1/2 < lambda <= 1.
struct AdaptSchedule {
  double c = 1.0;
  double lambda = 0.55;
  double phi(std::int64_t i) const { return c * std::pow(static_cast<double>(i), -lambda); }
};

// What one adaptation step actually did; lets callers assert the
// diminishing-adaptation bounds without re-deriving them.
struct AdaptDelta {
  double phi = 0.0;
  double max_dlogit_a = 0.0;          // EIA
  double max_dlogit_d = 0.0;          // EIA
  double dlogit_zeta_prefloor = 0.0;  // ASI
  double max_dpi_hat = 0.0;           // ASI
  bool floored = false;               // ASI zeta floor engaged
  double zeta_after = 0.0;            // ASI zeta after floor and clamp
  double floor_delta = 0.0;           // ASI Delta used by the floor
};

// Exploratory individual adaptation: per-variable (A_j, D_j) moved on the
// logit_eps scale by the expansion / shrinkage / correction rules. Only
// coordinates proposed to flip are touched. An acceptance probability
// above tau_u grows both A_j and D_j for the flipped coordinates, one
// below tau_l shrinks the responsible side, and the band in between
// corrects the A/D ratio toward the target slope.
class EiaState {
 public:
  // Starts at A = h and D = 1, both pulled into the interior of the
  // logit_eps box (initial logits capped at +-kLogitCap).
  EiaState(int p, double h, double eps, double tau_l = 0.01, double tau_u = 0.1,
           AdaptSchedule schedule = {});

  // Apply the update for one step: adds / dels are the proposed 0->1 and
  // 1->0 flips, a_i the acceptance probability.
  AdaptDelta update(const FlipList& adds, const FlipList& dels, double a_i);

  const ProposalParams& params() const { return params_; }
  std::int64_t iteration() const { return iter_; }
  double tau_l() const { return tau_l_; }
  double tau_u() const { return tau_u_; }

  static constexpr double kLogitCap = 15.0;

 private:
  ProposalParams params_;             // probabilities, derived from the logits
  Eigen::VectorXd logit_a_, logit_d_;  // the adapted state
  double tau_l_, tau_u_;
  AdaptSchedule schedule_;
  std::int64_t iter_ = 1;
};

// Adaptively scaled individual adaptation: a running Rao-Blackwellised
// estimate pi_hat of the inclusion probabilities fixes the direction of
// the proposal, and a single scale zeta is tuned toward the target
// acceptance rate tau. The floor zeta >= 1/Delta keeps the chain
// proposing at least one change with high probability.
class AsiState {
 public:
  AsiState(int p, double pi0, double eps, double kappa = 0.001, double tau = 0.234,
           AdaptSchedule schedule = {});

  // One adaptation step; rb_row is the Rao-Blackwell row of the current
  // state. When rb accumulation is frozen, pi_hat stays put and only zeta
  // moves.
  AdaptDelta update(const Eigen::VectorXd& rb_row, double a_i);

  // Exact update with the floor quantity Delta supplied by the caller.
  AdaptDelta update_with_delta(const Eigen::VectorXd* rb_row, double a_i, double delta);

  // Current proposal probabilities A_j = zeta * min{1, odds_j},
  // D_j = zeta * min{1, 1/odds_j}, clamped into [eps, 1-eps].
  ProposalParams params() const;

  // Same, reusing out's buffers; the odds ratios are cached so this is a
  // scale-and-clamp pass.
  void fill_params(ProposalParams& out) const;

  double delta() const;  // 2 sum_j min(pi_tilde_j, 1 - pi_tilde_j)
  double zeta() const { return zeta_; }
  const Eigen::VectorXd& pi_hat() const { return pi_hat_; }
  std::int64_t rb_count() const { return rb_count_; }
  std::int64_t iteration() const { return iter_; }
  void set_adapt_rb(bool v) { adapt_rb_ = v; }
  bool adapt_rb() const { return adapt_rb_; }
  double eps() const { return eps_; }
  double kappa() const { return kappa_; }
  double tau() const { return tau_; }

 private:
  void refresh_tilde();

  Eigen::VectorXd pi_hat_, pi_tilde_;
  Eigen::VectorXd r_add_, r_del_;  // min{1, odds}, min{1, 1/odds} of pi_tilde
  double zeta_;
  double zeta_lo_ = 0.0, zeta_hi_ = 1.0;  // interior of the logit_eps box
  double eps_, kappa_, tau_;
  AdaptSchedule schedule_;
  std::int64_t iter_ = 1;
  std::int64_t rb_count_ = 0;
  bool adapt_rb_ = true;
};

}  // namespace bvsmc

#endif  // BVSMC_ADAPT_HPP_
