#include "bvsmc/run.hpp"

#include <chrono>
#include <cmath>

#include "bvsmc/errors.hpp"

namespace bvsmc {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kEia: return "eia";
    case Algorithm::kAsi: return "asi";
    case Algorithm::kAds: return "ads";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "eia") return Algorithm::kEia;
  if (name == "asi") return Algorithm::kAsi;
  if (name == "ads") return Algorithm::kAds;
  throw ConfigError("unknown algorithm: " + name);
}

PtLadder PtLadder::geometric(int m, double swap_target, AdaptSchedule sched) {
  if (m < 2) throw ConfigError("parallel tempering needs at least two temperatures");
  PtLadder ladder;
  ladder.swap_target = swap_target;
  ladder.schedule = sched;
  ladder.rho.assign(m - 1, 0.0);  // sigmoid(0) = 1/2 gives t_k = 2^{k-m}
  ladder.temps.assign(m, 1.0);
  ladder.swap_attempts.assign(m - 1, 0);
  ladder.swap_accepts.assign(m - 1, 0);
  ladder.rebuild_temps();
  return ladder;
}

void PtLadder::rebuild_temps() {
  const int m = static_cast<int>(temps.size());
  temps[m - 1] = 1.0;
  for (int k = m - 2; k >= 0; --k) {
    const double s = 1.0 / (1.0 + std::exp(rho[k]));  // sigmoid(-rho_k)
    temps[k] = temps[k + 1] * s;
  }
}

void adapt_ladder(PtLadder& ladder, int k, double swap_accept_prob) {
  const double phi = ladder.schedule.phi(ladder.iter);
  ladder.rho[k] += phi * (swap_accept_prob - ladder.swap_target);
  ++ladder.iter;
  ladder.rebuild_temps();
}

PtSweepResult pt_swap_move(Chain* chains, int m, PtLadder& ladder, Rng& rng, bool adapt) {
  PtSweepResult res;
  res.gap = static_cast<int>(rng.uniform_int(m - 1));
  Chain& lo = chains[res.gap];      // hotter, t_k
  Chain& hi = chains[res.gap + 1];  // colder, t_{k+1}
  const double log_ratio = (lo.temperature() - hi.temperature()) *
                           (hi.log_marginal() - lo.log_marginal());
  res.swap_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (rng.uniform() < res.swap_prob) {
    lo.swap_state_with(hi);
    res.swapped = true;
    ++ladder.swap_accepts[res.gap];
  }
  ++ladder.swap_attempts[res.gap];
  if (adapt) adapt_ladder(ladder, res.gap, res.swap_prob);
  return res;
}

void RunConfig::validate() const {
  if (n_chains < 1) throw ConfigError("need at least one chain");
  if (burn_in < 0 || n_iters < 0) throw ConfigError("negative iteration counts");
  if (thin < 1) throw ConfigError("thin must be >= 1");
  if (eps > 0.0 && eps >= 0.5) throw ConfigError("eps must be < 1/2");
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0,1)");
  if (!(tau_l > 0.0 && tau_l < tau_u && tau_u < 1.0))
    throw ConfigError("require 0 < tau_l < tau_u < 1");
  if (pt && pt->n_temps < 2) throw ConfigError("--pt needs at least 2 temperatures");
}

namespace {

// Marsaglia-Tsang gamma variate; shape < 1 via the power boost. Only used
// for prior draws of h under Beta(a, b).
double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = rng.uniform_open();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

GammaVector draw_initial_model(const Dataset& data, const PriorSpec& prior, Rng& rng,
                               bool from_prior, bool rank_guard) {
  GammaVector gamma(data.p());
  if (!from_prior) return gamma;
  double h = prior.h;
  if (prior.h_mode == PriorSpec::HMode::kBeta) {
    const double x = gamma_draw(rng, prior.beta_a);
    const double y = gamma_draw(rng, prior.beta_b);
    h = x / (x + y);
  }
  const int cap = rank_guard ? data.n() - 2 : data.p();
  for (int j = 0; j < data.p() && gamma.count() < cap; ++j)
    if (rng.uniform() < h) gamma.set(j);
  return gamma;
}

// Replica-global g update under parallel tempering: one proposal shared
// by the whole ladder, accepted against the product of the tempered
// targets, so state swaps remain exchanges under a common g.
void pt_g_step(Chain* chains, int m, double step, Rng& rng) {
  const double g_cur = chains[0].prior().g;
  const double g_prop = g_cur * std::exp(step * rng.normal());
  const double u = rng.uniform_open();
  double log_ratio = std::log(g_prop) - std::log(g_cur) +
                     log_half_cauchy(g_prop, chains[0].prior().g_scale) -
                     log_half_cauchy(g_cur, chains[0].prior().g_scale);
  std::vector<SuffStats> rebuilt(m);
  for (int k = 0; k < m; ++k) {
    rebuilt[k] = SuffStats::build(chains[k].data(), g_prop, chains[k].gamma());
    log_ratio += chains[k].temperature() *
                 (rebuilt[k].log_marginal(chains[k].data().n()) - chains[k].log_marginal());
  }
  if (std::log(u) < log_ratio)
    for (int k = 0; k < m; ++k)
      chains[k].set_g_and_stats(g_prop, std::move(rebuilt[k]));
}

}  // namespace

RunOutput run_sampler(const Dataset& data, const PriorSpec& prior, const RunConfig& config,
                      const AdaptObserver* observer) {
  config.validate();
  prior.validate();
  const int p = data.p();
  const int L = config.n_chains;
  const int m = config.pt ? config.pt->n_temps : 1;
  const double eps = config.resolved_eps(p);
  const bool random_g = prior.g_mode == PriorSpec::GMode::kHalfCauchy;
  const bool is_asi = config.algorithm == Algorithm::kAsi;
  const bool is_eia = config.algorithm == Algorithm::kEia;
  const bool collect_rb = config.collect_rb.value_or(is_asi && !config.rb_burnin_only);
  const double h_eff = prior.h_mode == PriorSpec::HMode::kFixed
                           ? prior.h
                           : prior.beta_a / (prior.beta_a + prior.beta_b);

  PtLadder ladder;
  if (config.pt)
    ladder = PtLadder::geometric(m, config.pt->swap_target, config.schedule);

  const int n_adapt = (config.pt && !config.pt->share_eta) ? m : 1;
  std::vector<EiaState> eia_states;
  std::vector<AsiState> asi_states;
  if (is_eia)
    for (int s = 0; s < n_adapt; ++s)
      eia_states.emplace_back(p, h_eff, eps, config.tau_l, config.tau_u, config.schedule);
  if (is_asi)
    for (int s = 0; s < n_adapt; ++s)
      asi_states.emplace_back(p, h_eff, eps, config.kappa, config.tau, config.schedule);

  // chain (replica l, level k) lives at l*m + k and owns RNG stream
  // 1 + l*m + k; stream 1 + L*m + l drives replica l's swap and g moves.
  std::vector<Chain> chains;
  chains.reserve(static_cast<std::size_t>(L) * m);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < m; ++k) {
      Rng rng(config.seed, 1 + static_cast<std::uint64_t>(l) * m + k);
      GammaVector init =
          draw_initial_model(data, prior, rng, config.init_from_prior, config.rank_guard);
      const double t = config.pt ? ladder.temps[k] : 1.0;
      chains.emplace_back(data, prior, t, std::move(init), rng, config.rank_guard, k);
    }
  }
  std::vector<Rng> aux_rngs;
  for (int l = 0; l < L; ++l)
    aux_rngs.emplace_back(config.seed, 1 + static_cast<std::uint64_t>(L) * m + l);

  RunOutput out;
  out.p = p;
  out.n_chains = L;
  out.burn_in = config.burn_in;
  out.n_iters = config.n_iters;
  out.thin = config.thin;
  out.seed = config.seed;
  out.algorithm = config.algorithm;
  out.n_draws = config.n_iters / config.thin;
  out.words_per_draw = (p + 63) / 64;
  out.samples.assign(static_cast<std::size_t>(out.n_draws) * L * out.words_per_draw, 0);
  const std::size_t n_steps = static_cast<std::size_t>(config.n_iters) * L;
  out.accept_series.assign(n_steps, 0.0);
  out.accepted.assign(n_steps, 0);
  out.n_proposed.assign(n_steps, 0);
  out.model_size.assign(n_steps, 0);
  out.log_post.assign(n_steps, 0.0);
  if (collect_rb) out.rb_row_mean = Eigen::VectorXd::Zero(p);

  Eigen::VectorXd rb_row(p);
  ProposalParams asi_params_buf;

  const auto t_start = std::chrono::steady_clock::now();
  auto t_burn_end = t_start;
  bool boundary_seen = false;
  bool frozen = false;

  const std::int64_t total_iters = config.burn_in + config.n_iters;
  for (std::int64_t iter = 1; iter <= total_iters; ++iter) {
    const bool main_phase = iter > config.burn_in;
    if (iter == config.burn_in + 1) {
      t_burn_end = std::chrono::steady_clock::now();
      boundary_seen = true;
      if (config.rb_burnin_only)
        for (auto& s : asi_states) s.set_adapt_rb(false);
      if (config.adapt_burnin_only) frozen = true;
    }

    for (int l = 0; l < L; ++l) {
      for (int k = 0; k < m; ++k) {
        Chain& chain = chains[static_cast<std::size_t>(l) * m + k];
        const int s_idx = n_adapt == 1 ? 0 : k;
        StepRecord rec;
        switch (config.algorithm) {
          case Algorithm::kAds:
            rec = chain.ads_step();
            break;
          case Algorithm::kEia:
            rec = chain.mh_step(eia_states[s_idx].params(), config.sampling);
            break;
          case Algorithm::kAsi:
            asi_states[s_idx].fill_params(asi_params_buf);
            rec = chain.mh_step(asi_params_buf, config.sampling);
            break;
        }

        const bool cold = k == m - 1;
        bool have_row = false;
        if (is_asi) {
          const bool need_for_adapt = !frozen && asi_states[s_idx].adapt_rb();
          const bool need_for_pips = cold && main_phase && collect_rb;
          if (need_for_adapt || need_for_pips) {
            chain.add_rb_warnings(chain.rb_row(chain.prior(), rb_row));
            have_row = true;
          }
        }

        if (!frozen && (is_eia || is_asi)) {
          AdaptEvent ev;
          if (is_eia) {
            ev.adapt_iter = eia_states[s_idx].iteration();
            ev.delta = eia_states[s_idx].update(rec.adds, rec.dels, rec.accept_prob);
          } else {
            AsiState& st = asi_states[s_idx];
            ev.adapt_iter = st.iteration();
            ev.delta = st.adapt_rb() && have_row
                           ? st.update(rb_row, rec.accept_prob)
                           : st.update_with_delta(nullptr, rec.accept_prob, st.delta());
          }
          if (observer) {
            ev.iteration = iter;
            ev.chain = l;
            ev.level = k;
            ev.record = &rec;
            (*observer)(ev);
          }
        }

        if (cold && main_phase) {
          const std::int64_t it_main = iter - config.burn_in;  // 1-based
          const std::size_t idx = static_cast<std::size_t>(it_main - 1) * L + l;
          out.accept_series[idx] = rec.accept_prob;
          out.accepted[idx] = rec.accepted ? 1 : 0;
          out.n_proposed[idx] = rec.n_proposed;
          out.model_size[idx] = chain.gamma().count();
          out.log_post[idx] = chain.log_post();
          if (have_row && collect_rb) {
            ++out.rb_row_count;
            out.rb_row_mean += (rb_row - out.rb_row_mean) / out.rb_row_count;
          }
          if (it_main % config.thin == 0) {
            const std::int64_t draw = it_main / config.thin - 1;
            const std::size_t base =
                (static_cast<std::size_t>(draw) * L + l) * out.words_per_draw;
            for (int j : chain.gamma().included())
              out.samples[base + j / 64] |= 1ull << (j % 64);
          }
        }

        if (random_g && !config.pt) chain.g_step(config.g_step);
      }
    }

    if (config.pt) {
      for (int l = 0; l < L; ++l) {
        Chain* slice = chains.data() + static_cast<std::ptrdiff_t>(l) * m;
        pt_swap_move(slice, m, ladder, aux_rngs[l], !frozen);
        if (random_g) pt_g_step(slice, m, config.g_step, aux_rngs[l]);
      }
      for (int l = 0; l < L; ++l)
        for (int k = 0; k < m; ++k)
          chains[static_cast<std::size_t>(l) * m + k].set_temperature(ladder.temps[k]);
    }

    if (config.trace_stride > 0 && iter % config.trace_stride == 0) {
      out.trace_iters.push_back(iter);
      if (is_asi) out.zeta_trace.push_back(asi_states[0].zeta());
      if (is_eia) {
        out.a_trace.push_back(eia_states[0].params().a_probs);
        out.d_trace.push_back(eia_states[0].params().d_probs);
      }
    }
  }

  const auto t_end = std::chrono::steady_clock::now();
  if (!boundary_seen) t_burn_end = t_end;
  out.burn_seconds = std::chrono::duration<double>(t_burn_end - t_start).count();
  out.main_seconds = std::chrono::duration<double>(t_end - t_burn_end).count();
  out.total_seconds = std::chrono::duration<double>(t_end - t_start).count();

  for (const Chain& c : chains) {
    out.numeric_rejects += c.numeric_rejects();
    out.rb_warnings += c.rb_warnings();
    if (c.max_rebuild_drift() > out.max_rebuild_drift)
      out.max_rebuild_drift = c.max_rebuild_drift();
  }
  if (is_asi) out.final_zeta = asi_states[0].zeta();
  if (config.pt) out.final_temps = ladder.temps;
  out.final_g = chains[static_cast<std::size_t>(m) - 1].prior().g;
  return out;
}

}  // namespace bvsmc
