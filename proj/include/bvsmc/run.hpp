#ifndef BVSMC_RUN_HPP_
#define BVSMC_RUN_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bvsmc/adapt.hpp"
#include "bvsmc/chain.hpp"
#include "bvsmc/dataset.hpp"
#include "bvsmc/prior.hpp"
#include "bvsmc/proposal.hpp"

namespace bvsmc {

inline constexpr const char* kVersion = "bvsmc 0.1.0";

enum class Algorithm { kEia, kAsi, kAds };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// Adaptive parallel-tempering ladder. Temperatures are parameterized by
// log-gap variables rho: t_m = 1 and t_k = t_{k+1} * sigmoid(-rho_k), so
// any rho gives a strictly increasing ladder ending at 1.
struct PtLadder {
  std::vector<double> temps;  // ascending, temps.back() == 1
  std::vector<double> rho;    // size temps.size() - 1
  double swap_target = 0.234;
  AdaptSchedule schedule;
  std::int64_t iter = 1;
  std::vector<std::int64_t> swap_attempts, swap_accepts;  // per gap

  // Geometric initialization t_k = 2^{k-m}.
  static PtLadder geometric(int m, double swap_target = 0.234, AdaptSchedule sched = {});
  void rebuild_temps();
};

// One stochastic-approximation update of gap k toward the target swap
// rate: rho_k += phi_i (a_swap - target), temps rebuilt.
void adapt_ladder(PtLadder& ladder, int k, double swap_accept_prob);

struct PtConfig {
  int n_temps = 4;
  double swap_target = 0.234;
  bool share_eta = false;  // one set of proposal parameters across levels
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kAsi;
  int n_chains = 1;
  std::int64_t burn_in = 0;
  std::int64_t n_iters = 1000;
  std::int64_t thin = 1;
  std::uint64_t seed = 1;

  double tau = 0.234;          // ASI target acceptance rate
  double tau_l = 0.01, tau_u = 0.1;
  double kappa = 0.001;
  double eps = -1.0;           // <= 0 resolves to 0.1/p
  AdaptSchedule schedule;
  bool rb_burnin_only = false;      // freeze pi_hat after burn-in
  bool adapt_burnin_only = false;   // freeze all adaptation after burn-in
  std::optional<bool> collect_rb;   // main-phase RB accumulation for pip_rb

  bool rank_guard = true;
  double g_step = 0.5;              // log-scale RW step for random g
  bool init_from_prior = false;
  SamplingMode sampling = SamplingMode::kAuto;
  std::int64_t trace_stride = 0;    // adaptation snapshots, 0 = off

  std::optional<PtConfig> pt;

  double resolved_eps(int p) const { return eps > 0.0 ? eps : 0.1 / p; }
  void validate() const;
};

// Everything a run records. Per-step series cover the post-burn-in phase
// of the cold (t = 1) level, iteration-major then chain-minor.
struct RunOutput {
  int p = 0;
  int n_chains = 1;
  std::int64_t burn_in = 0, n_iters = 0, thin = 1;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kAsi;

  std::int64_t n_draws = 0;               // thinned draws per chain
  int words_per_draw = 0;
  std::vector<std::uint64_t> samples;     // [draw][chain][word] bit-packed

  std::vector<double> accept_series;      // length n_iters * n_chains
  std::vector<std::uint8_t> accepted;
  std::vector<std::int32_t> n_proposed;
  std::vector<std::int32_t> model_size;
  std::vector<double> log_post;

  Eigen::VectorXd rb_row_mean;            // main-phase RB mean (may be empty)
  std::int64_t rb_row_count = 0;

  std::vector<std::int64_t> trace_iters;  // adaptation snapshots
  std::vector<double> zeta_trace;
  std::vector<Eigen::VectorXd> a_trace, d_trace;

  std::vector<double> final_temps;        // PT ladder at the end
  double final_zeta = 0.0;
  double final_g = 0.0;

  double burn_seconds = 0.0, main_seconds = 0.0, total_seconds = 0.0;
  std::int64_t numeric_rejects = 0;
  std::int64_t rb_warnings = 0;
  double max_rebuild_drift = 0.0;
  std::string version = kVersion;

  bool sample_bit(std::int64_t draw, int chain, int j) const {
    const std::size_t base =
        (static_cast<std::size_t>(draw) * n_chains + chain) * words_per_draw;
    return (samples[base + j / 64] >> (j % 64)) & 1u;
  }
};

// Diminishing-adaptation bookkeeping handed to the observer after every
// adaptation step.
struct AdaptEvent {
  std::int64_t adapt_iter = 0;  // the i of phi_i that was applied
  std::int64_t iteration = 0;   // sweep number (1-based, includes burn-in)
  int chain = 0;
  int level = 0;
  AdaptDelta delta;
  const StepRecord* record = nullptr;
};
using AdaptObserver = std::function<void(const AdaptEvent&)>;

RunOutput run_sampler(const Dataset& data, const PriorSpec& prior, const RunConfig& config,
                      const AdaptObserver* observer = nullptr);

inline RunOutput run_eia(const Dataset& d, const PriorSpec& pr, RunConfig c,
                         const AdaptObserver* obs = nullptr) {
  c.algorithm = Algorithm::kEia;
  return run_sampler(d, pr, c, obs);
}
inline RunOutput run_asi(const Dataset& d, const PriorSpec& pr, RunConfig c,
                         const AdaptObserver* obs = nullptr) {
  c.algorithm = Algorithm::kAsi;
  return run_sampler(d, pr, c, obs);
}
inline RunOutput run_ads(const Dataset& d, const PriorSpec& pr, RunConfig c,
                         const AdaptObserver* obs = nullptr) {
  c.algorithm = Algorithm::kAds;
  return run_sampler(d, pr, c, obs);
}

// One swap attempt over a contiguous ladder of m chains (hottest first):
// a uniformly drawn adjacent pair (k, k+1) exchanges states with
// probability min{1, exp((t_k - t_{k+1}) (log m(gamma_{k+1}) -
// log m(gamma_k)))}, and the ladder is adapted toward its target swap
// rate unless adapt is false.
struct PtSweepResult {
  int gap = -1;
  double swap_prob = 0.0;
  bool swapped = false;
};
PtSweepResult pt_swap_move(Chain* ladder_chains, int m, PtLadder& ladder, Rng& rng,
                           bool adapt = true);

}  // namespace bvsmc

#endif  // BVSMC_RUN_HPP_
