#include "bvsmc/adapt.hpp"

#include <algorithm>
#include <cmath>

#include "bvsmc/errors.hpp"

namespace bvsmc {

EiaState::EiaState(int p, double h, double eps, double tau_l, double tau_u,
                   AdaptSchedule schedule)
    : tau_l_(tau_l), tau_u_(tau_u), schedule_(schedule) {
  if (!(0.0 < tau_l && tau_l < tau_u && tau_u < 1.0))
    throw ConfigError("require 0 < tau_l < tau_u < 1");
  if (!(schedule.lambda > 0.5 && schedule.lambda <= 1.0))
    throw ConfigError("require 1/2 < lambda <= 1");
  // A^(1) = h, D^(1) = 1, pulled into the interior of the box so the
  // logit state stays finite
  double la = kLogitCap;
  if (h > eps && h < 1.0 - eps)
    la = std::clamp(logit_eps(h, eps), -kLogitCap, kLogitCap);
  else if (h <= eps)
    la = -kLogitCap;
  logit_a_ = Eigen::VectorXd::Constant(p, la);
  logit_d_ = Eigen::VectorXd::Constant(p, kLogitCap);
  params_.eps = eps;
  params_.a_probs = Eigen::VectorXd::Constant(p, inv_logit_eps(la, eps));
  params_.d_probs = Eigen::VectorXd::Constant(p, inv_logit_eps(kLogitCap, eps));
  params_.rebuild_sparse_index();
}

AdaptDelta EiaState::update(const FlipList& adds, const FlipList& dels, double a_i) {
  AdaptDelta delta;
  const double phi = schedule_.phi(iter_);
  delta.phi = phi;
  const double d_u = a_i >= tau_u_ ? 1.0 : 0.0;
  const double d_l = a_i >= tau_l_ ? 1.0 : 0.0;
  const double eps = params_.eps;

  // gamma^A coordinates: logit A_j by phi*(2 d_U - 1), logit D_j by phi*d_L
  const double da_add = phi * (2.0 * d_u - 1.0);
  const double dd_add = phi * d_l;
  for (std::size_t i = 0; i < adds.size(); ++i) {
    const int j = adds[i];
    logit_a_[j] += da_add;
    logit_d_[j] += dd_add;
    delta.max_dlogit_a = std::max(delta.max_dlogit_a, std::abs(da_add));
    delta.max_dlogit_d = std::max(delta.max_dlogit_d, std::abs(dd_add));
    params_.a_probs[j] = inv_logit_eps(logit_a_[j], eps);
    params_.d_probs[j] = inv_logit_eps(logit_d_[j], eps);
    params_.note_a_raised(j);
  }
  // gamma^D coordinates: logit D_j by phi*(2 d_U - 1), logit A_j by phi*d_L
  const double dd_del = phi * (2.0 * d_u - 1.0);
  const double da_del = phi * d_l;
  for (std::size_t i = 0; i < dels.size(); ++i) {
    const int j = dels[i];
    logit_a_[j] += da_del;
    logit_d_[j] += dd_del;
    delta.max_dlogit_a = std::max(delta.max_dlogit_a, std::abs(da_del));
    delta.max_dlogit_d = std::max(delta.max_dlogit_d, std::abs(dd_del));
    params_.a_probs[j] = inv_logit_eps(logit_a_[j], eps);
    params_.d_probs[j] = inv_logit_eps(logit_d_[j], eps);
    params_.note_a_raised(j);
  }

  ++iter_;
  if ((iter_ & 0xFFF) == 0) params_.rebuild_sparse_index();  // prune the stale hot set
  return delta;
}

AsiState::AsiState(int p, double pi0, double eps, double kappa, double tau,
                   AdaptSchedule schedule)
    : pi_hat_(Eigen::VectorXd::Constant(p, pi0)),
      zeta_(0.5),
      eps_(eps),
      kappa_(kappa),
      tau_(tau),
      schedule_(schedule) {
  if (kappa <= 0.0 || kappa >= 0.5) throw ConfigError("require 0 < kappa < 1/2");
  if (!(schedule.lambda > 0.5 && schedule.lambda <= 1.0))
    throw ConfigError("require 1/2 < lambda <= 1");
  zeta_lo_ = inv_logit_eps(-EiaState::kLogitCap, eps);
  zeta_hi_ = inv_logit_eps(EiaState::kLogitCap, eps);
  refresh_tilde();
}

void AsiState::refresh_tilde() {
  pi_tilde_ = (kappa_ + (1.0 - 2.0 * kappa_) * pi_hat_.array()).matrix();
  const auto odds = pi_tilde_.array() / (1.0 - pi_tilde_.array());
  r_add_ = odds.min(1.0).matrix();
  r_del_ = odds.inverse().min(1.0).matrix();
}

double AsiState::delta() const {
  return 2.0 * pi_tilde_.array().min(1.0 - pi_tilde_.array()).sum();
}

AdaptDelta AsiState::update(const Eigen::VectorXd& rb_row, double a_i) {
  // pi_hat moves first, so the floor sees the post-update pi_tilde
  AdaptDelta d;
  if (adapt_rb_) {
    const double w = 1.0 / static_cast<double>(rb_count_ + 1);
    d.max_dpi_hat = w * (rb_row - pi_hat_).cwiseAbs().maxCoeff();
    pi_hat_ += w * (rb_row - pi_hat_);
    ++rb_count_;
    refresh_tilde();
  }
  AdaptDelta d2 = update_with_delta(nullptr, a_i, delta());
  d2.max_dpi_hat = d.max_dpi_hat;
  return d2;
}

AdaptDelta AsiState::update_with_delta(const Eigen::VectorXd* rb_row, double a_i,
                                       double floor_delta) {
  AdaptDelta d;
  if (rb_row != nullptr && adapt_rb_) {
    const double w = 1.0 / static_cast<double>(rb_count_ + 1);
    d.max_dpi_hat = w * (*rb_row - pi_hat_).cwiseAbs().maxCoeff();
    pi_hat_ += w * (*rb_row - pi_hat_);
    ++rb_count_;
    refresh_tilde();
  }
  const double phi = schedule_.phi(iter_);
  d.phi = phi;
  d.dlogit_zeta_prefloor = phi * (a_i - tau_);
  double zeta_new = inv_logit_eps(logit_eps(zeta_, eps_) + d.dlogit_zeta_prefloor, eps_);
  if (zeta_new * floor_delta < 1.0) {
    // keep at least one proposed change with high probability; clamp into
    // the interior of the logit_eps box when 1/Delta escapes it
    zeta_new = std::min(std::max(1.0 / floor_delta, zeta_lo_), zeta_hi_);
    d.floored = true;
  }
  zeta_ = zeta_new;
  d.zeta_after = zeta_;
  d.floor_delta = floor_delta;
  ++iter_;
  return d;
}

ProposalParams AsiState::params() const {
  ProposalParams out;
  fill_params(out);
  return out;
}

void AsiState::fill_params(ProposalParams& out) const {
  const int p = static_cast<int>(pi_hat_.size());
  out.eps = eps_;
  out.a_probs = (zeta_ * r_add_.array()).max(eps_).min(1.0 - eps_).matrix();
  out.d_probs = (zeta_ * r_del_.array()).max(eps_).min(1.0 - eps_).matrix();
  out.hot_mask.assign(p, 0);
  out.hot_adds.clear();
  double bound = 0.0;
  for (int j = 0; j < p; ++j) {
    const double a = out.a_probs[j];
    if (a > ProposalParams::kHotThreshold) {
      out.hot_mask[j] = 1;
      out.hot_adds.push_back(j);
    } else if (a > bound) {
      bound = a;
    }
  }
  out.thin_bound = bound;
}

}  // namespace bvsmc
