#include <doctest.h>

#include <cmath>

#include "bvsmc/diagnostics.hpp"
#include "bvsmc/idealized.hpp"
#include "bvsmc/run.hpp"
#include "oracle.hpp"

using namespace bvsmc;
using bvsmc::testing::random_dataset;

TEST_SUITE_BEGIN("samplers");

namespace {

Dataset sampler_test_data(int n, int p, std::uint64_t seed) {
  return random_dataset(n, p, seed, 2, 1.2);
}

}  // namespace

TEST_CASE("mh_step: identity proposal is accepted with probability one") {
  Dataset data = sampler_test_data(12, 5, 7);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.3);
  Chain chain(data, prior, 1.0, GammaVector(5), Rng(1, 1));
  ProposalParams params = ProposalParams::constant(5, 1e-13, 1e-13, 0.0);
  const double lp0 = chain.log_post();
  for (int i = 0; i < 100; ++i) {
    const StepRecord rec = chain.mh_step(params);
    CHECK(rec.accept_prob == doctest::Approx(1.0));
    CHECK(rec.accepted);
    CHECK(rec.n_proposed == 0);
  }
  CHECK(chain.log_post() == lp0);
  CHECK(chain.gamma().count() == 0);
}

TEST_CASE("run_sampler: zero main iterations is a valid configuration") {
  Dataset data = sampler_test_data(10, 4, 9);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.25);
  RunConfig config;
  config.algorithm = Algorithm::kEia;
  config.n_chains = 1;
  config.burn_in = 0;
  config.n_iters = 0;
  config.seed = 3;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK(out.n_draws == 0);
  CHECK(out.accept_series.empty());
}

TEST_CASE("run_sampler: identical seeds give identical outputs") {
  Dataset data = sampler_test_data(20, 8, 21);
  PriorSpec prior = PriorSpec::fixed(5.0, 0.2);
  for (Algorithm algo : {Algorithm::kEia, Algorithm::kAsi, Algorithm::kAds}) {
    RunConfig config;
    config.algorithm = algo;
    config.n_chains = 3;
    config.burn_in = 200;
    config.n_iters = 500;
    config.thin = 2;
    config.seed = 1234;
    const RunOutput a = run_sampler(data, prior, config);
    const RunOutput b = run_sampler(data, prior, config);
    CHECK(a.samples == b.samples);
    CHECK(a.accept_series == b.accept_series);
    CHECK(a.log_post == b.log_post);
    if (algo == Algorithm::kAsi) {
      CHECK(a.final_zeta == b.final_zeta);
      CHECK(a.rb_row_mean == b.rb_row_mean);
    }
  }
}

TEST_CASE("run_sampler: sample counts match the thinning contract") {
  Dataset data = sampler_test_data(12, 5, 33);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.25);
  RunConfig config;
  config.algorithm = Algorithm::kAsi;
  config.n_chains = 2;
  config.burn_in = 50;
  config.n_iters = 103;
  config.thin = 10;
  config.seed = 5;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK(out.n_draws == 10);
  CHECK(out.accept_series.size() == 103 * 2);
}

TEST_CASE("samplers recover enumeration PIPs on a small instance") {
  const int p = 6;
  Dataset data = sampler_test_data(30, p, 55);
  PriorSpec prior = PriorSpec::fixed(9.0, 2.0 / p);
  const Eigen::VectorXd exact = enumerate_posterior(data, prior).pips;

  auto run_and_check = [&](Algorithm algo, std::optional<PtConfig> pt) {
    RunConfig config;
    config.algorithm = algo;
    config.pt = pt;
    config.n_chains = 1;
    config.burn_in = 5000;
    config.n_iters = 200000;
    config.seed = 42;
    const RunOutput out = run_sampler(data, prior, config);
    const Eigen::VectorXd pips = pip_empirical(out);
    CHECK((pips - exact).cwiseAbs().maxCoeff() < 0.03);
    if (algo == Algorithm::kAsi && !pt) {
      const Eigen::VectorXd rb = pip_rb(out);
      CHECK((rb - exact).cwiseAbs().maxCoeff() < 0.02);
    }
  };

  run_and_check(Algorithm::kEia, std::nullopt);
  run_and_check(Algorithm::kAsi, std::nullopt);
  run_and_check(Algorithm::kAds, std::nullopt);
  run_and_check(Algorithm::kAsi, PtConfig{2, 0.234, false});
}

TEST_CASE("mh_step with fixed parameters targets the exact posterior") {
  const int p = 8;
  Dataset data = sampler_test_data(30, p, 67);
  PriorSpec prior = PriorSpec::fixed(9.0, 0.25);
  const Eigen::VectorXd exact = enumerate_posterior(data, prior).pips;

  ProposalParams params = ProposalParams::constant(p, 0.5, 0.9, 0.0);
  Chain chain(data, prior, 1.0, GammaVector(p), Rng(3, 1));
  const long n_steps = 1000000;
  const int n_batches = 50;
  const long batch = n_steps / n_batches;
  Eigen::MatrixXd batch_means = Eigen::MatrixXd::Zero(n_batches, p);
  for (int b = 0; b < n_batches; ++b)
    for (long i = 0; i < batch; ++i) {
      chain.mh_step(params);
      for (int j : chain.gamma().included()) batch_means(b, j) += 1.0;
    }
  batch_means /= static_cast<double>(batch);
  const Eigen::VectorXd pips = batch_means.colwise().mean();
  for (int j = 0; j < p; ++j) {
    const double se =
        std::sqrt((batch_means.col(j).array() - pips[j]).square().sum() /
                  (n_batches - 1.0) / n_batches);
    CHECK(std::abs(pips[j] - exact[j]) < 3.5 * se + 1e-4);
  }
}

TEST_CASE("ads_step: impossible swaps are recorded as no-ops") {
  Dataset data = sampler_test_data(10, 3, 77);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.5);

  // fresh chains so every drawn swap hits the boundary state
  SUBCASE("empty model") {
    int noops = 0;
    for (int i = 0; i < 100; ++i) {
      Chain chain(data, prior, 1.0, GammaVector(3), Rng(2, 1 + i));
      const StepRecord rec = chain.ads_step();
      if (!rec.attempted) {
        ++noops;
        CHECK(rec.n_proposed == 0);
        CHECK(!rec.accepted);
      }
    }
    CHECK(noops > 20);  // about half the draws are swaps
  }

  SUBCASE("full model") {
    GammaVector full(3);
    for (int j = 0; j < 3; ++j) full.set(j);
    int noops = 0;
    for (int i = 0; i < 100; ++i) {
      Chain chain(data, prior, 1.0, full, Rng(3, 1 + i));
      const StepRecord rec = chain.ads_step();
      if (!rec.attempted) ++noops;
    }
    CHECK(noops > 20);
  }
}

TEST_CASE("pt swap acceptance: trivial unit cases") {
  Dataset data = sampler_test_data(15, 4, 91);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.3);

  SUBCASE("identical temperatures") {
    std::vector<Chain> chains;
    chains.emplace_back(data, prior, 0.7, GammaVector(4), Rng(4, 1));
    GammaVector other(4);
    other.set(2);
    chains.emplace_back(data, prior, 0.7, other, Rng(4, 2));
    PtLadder ladder = PtLadder::geometric(2);
    const PtSweepResult res = pt_swap_move(chains.data(), 2, ladder, chains[0].rng(), false);
    CHECK(res.swap_prob == doctest::Approx(1.0));
  }

  SUBCASE("identical states") {
    GammaVector g(4);
    g.set(1);
    std::vector<Chain> chains;
    chains.emplace_back(data, prior, 0.25, g, Rng(5, 1));
    chains.emplace_back(data, prior, 1.0, g, Rng(5, 2));
    PtLadder ladder = PtLadder::geometric(2);
    const PtSweepResult res = pt_swap_move(chains.data(), 2, ladder, chains[0].rng(), false);
    CHECK(res.swap_prob == doctest::Approx(1.0));
  }
}

TEST_CASE("adapt_ladder: fixed point, widening, reconstruction") {
  PtLadder ladder = PtLadder::geometric(4);
  const std::vector<double> t0 = ladder.temps;
  CHECK(t0.back() == 1.0);
  CHECK(t0[0] == doctest::Approx(0.125));

  SUBCASE("swap probability at target leaves the ladder unchanged") {
    adapt_ladder(ladder, 1, ladder.swap_target);
    for (int k = 0; k < 4; ++k) CHECK(ladder.temps[k] == doctest::Approx(t0[k]));
  }

  SUBCASE("repeated certain swaps widen the gap") {
    double prev = ladder.temps[1];
    for (int i = 0; i < 50; ++i) {
      adapt_ladder(ladder, 1, 1.0);
      CHECK(ladder.temps[1] <= prev + 1e-15);
      prev = ladder.temps[1];
    }
    CHECK(ladder.temps[1] < t0[1]);
    CHECK(ladder.temps[2] == doctest::Approx(t0[2]));  // only gap 1 moved
  }

  SUBCASE("rho -> temps -> rho round-trips") {
    Rng rng(6, 1);
    for (int k = 0; k < 3; ++k) ladder.rho[k] = 2.0 * rng.normal();
    ladder.rebuild_temps();
    for (int k = 0; k < 3; ++k) {
      const double ratio = ladder.temps[k] / ladder.temps[k + 1];
      const double rho_back = -std::log(ratio / (1.0 - ratio));
      CHECK(rho_back == doctest::Approx(ladder.rho[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("pt cold chain recovers enumeration PIPs") {
  const int p = 6;
  Dataset data = sampler_test_data(25, p, 111);
  PriorSpec prior = PriorSpec::fixed(6.0, 2.0 / p);
  const Eigen::VectorXd exact = enumerate_posterior(data, prior).pips;

  RunConfig config;
  config.algorithm = Algorithm::kEia;
  config.pt = PtConfig{2, 0.234, false};
  config.n_chains = 1;
  config.burn_in = 5000;
  config.n_iters = 150000;
  config.seed = 7;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK((pip_empirical(out) - exact).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("incrementally maintained log posterior matches a fresh rebuild") {
  Dataset data = sampler_test_data(25, 10, 131);
  PriorSpec prior = PriorSpec::fixed(5.0, 0.15);
  Chain chain(data, prior, 1.0, GammaVector(10), Rng(8, 1));
  EiaState adapt(10, 0.15, 0.01);
  for (int i = 0; i < 3000; ++i) {
    const StepRecord rec = chain.mh_step(adapt.params());
    adapt.update(rec.adds, rec.dels, rec.accept_prob);
    if (i % 500 == 499) CHECK(chain.rebuild() < 1e-8);
  }
}

TEST_CASE("multi-chain: frozen adaptation leaves chains exchangeable") {
  const int p = 5;
  Dataset data = sampler_test_data(40, p, 151);
  PriorSpec prior = PriorSpec::fixed(9.0, 0.2);
  RunConfig config;
  config.algorithm = Algorithm::kAsi;
  config.n_chains = 4;
  config.burn_in = 3000;
  config.n_iters = 60000;
  config.adapt_burnin_only = true;
  config.seed = 99;
  const RunOutput out = run_sampler(data, prior, config);

  Eigen::MatrixXd per_chain = Eigen::MatrixXd::Zero(config.n_chains, p);
  for (std::int64_t d = 0; d < out.n_draws; ++d)
    for (int c = 0; c < config.n_chains; ++c)
      for (int j = 0; j < p; ++j)
        if (out.sample_bit(d, c, j)) per_chain(c, j) += 1.0;
  per_chain /= static_cast<double>(out.n_draws);
  for (int c = 1; c < config.n_chains; ++c)
    CHECK((per_chain.row(c) - per_chain.row(0)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("asi floor invariant along a run") {
  Dataset data = sampler_test_data(20, 6, 171);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.1);
  RunConfig config;
  config.algorithm = Algorithm::kAsi;
  config.n_chains = 2;
  config.burn_in = 0;
  config.n_iters = 4000;
  config.seed = 11;
  const double eps = config.resolved_eps(6);
  // zeta*Delta >= 1 unless 1/Delta escapes the logit_eps box, in which
  // case zeta sits at the box ceiling
  const double zeta_ceiling = inv_logit_eps(EiaState::kLogitCap, eps);
  std::int64_t events = 0;
  AdaptObserver obs = [&](const AdaptEvent& ev) {
    ++events;
    const bool satisfied = ev.delta.zeta_after * ev.delta.floor_delta >= 1.0 - 1e-12;
    const bool clamped_corner = ev.delta.zeta_after >= zeta_ceiling - 1e-12;
    CHECK((satisfied || clamped_corner));
  };
  run_sampler(data, prior, config, &obs);
  CHECK(events == 2 * 4000);
}

TEST_CASE("beta-binomial prior: ASI matches enumeration") {
  const int p = 6;
  Dataset data = sampler_test_data(30, p, 201);
  PriorSpec prior = PriorSpec::beta_binomial(6.0, 1.0, 4.0);
  const Eigen::VectorXd exact = enumerate_posterior(data, prior).pips;
  RunConfig config;
  config.algorithm = Algorithm::kAsi;
  config.burn_in = 5000;
  config.n_iters = 150000;
  config.seed = 13;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK((pip_empirical(out) - exact).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("shared-eta parallel tempering runs deterministically") {
  Dataset data = sampler_test_data(20, 5, 211);
  PriorSpec prior = PriorSpec::fixed(4.0, 0.2);
  RunConfig config;
  config.algorithm = Algorithm::kEia;
  config.pt = PtConfig{3, 0.234, true};
  config.n_chains = 2;
  config.burn_in = 100;
  config.n_iters = 400;
  config.seed = 31;
  const RunOutput a = run_sampler(data, prior, config);
  const RunOutput b = run_sampler(data, prior, config);
  CHECK(a.samples == b.samples);
  CHECK(a.final_temps == b.final_temps);
  CHECK(a.final_temps.back() == 1.0);
}

TEST_CASE("random g without tempering updates per chain") {
  Dataset data = sampler_test_data(25, 5, 221);
  PriorSpec prior = PriorSpec::fixed(2.0, 0.2);
  prior.g_mode = PriorSpec::GMode::kHalfCauchy;
  prior.g_scale = 1.0;
  RunConfig config;
  config.algorithm = Algorithm::kAds;
  config.n_chains = 2;
  config.burn_in = 200;
  config.n_iters = 2000;
  config.seed = 41;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK(out.final_g > 0.0);
  CHECK(out.final_g != 2.0);  // the chain moved off the initial value
  CHECK(out.numeric_rejects == 0);
}

TEST_CASE("random g: parallel tempering keeps a common g per replica") {
  Dataset data = sampler_test_data(20, 5, 191);
  PriorSpec prior = PriorSpec::fixed(2.0, 0.2);
  prior.g_mode = PriorSpec::GMode::kHalfCauchy;
  prior.g_scale = 1.0;
  RunConfig config;
  config.algorithm = Algorithm::kAsi;
  config.pt = PtConfig{3, 0.234, false};
  config.n_chains = 1;
  config.burn_in = 100;
  config.n_iters = 400;
  config.seed = 17;
  const RunOutput out = run_sampler(data, prior, config);
  CHECK(out.final_g > 0.0);
  CHECK(out.numeric_rejects == 0);
}

TEST_SUITE_END();
