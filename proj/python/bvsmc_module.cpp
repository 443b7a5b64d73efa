// Python bindings for the sampler library: synthetic data, the three
// samplers (with optional parallel tempering), exact enumeration, the
// idealized closed forms, and the ESS estimator.

#include <algorithm>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bvsmc/csv_io.hpp"
#include "bvsmc/diagnostics.hpp"
#include "bvsmc/errors.hpp"
#include "bvsmc/idealized.hpp"
#include "bvsmc/run.hpp"
#include "bvsmc/synthetic.hpp"

namespace py = pybind11;
using namespace bvsmc;

namespace {

PriorSpec make_prior(double g, double h, std::optional<std::pair<double, double>> h_beta,
                     std::optional<double> g_half_cauchy) {
  PriorSpec prior;
  prior.g = g;
  if (g_half_cauchy) {
    prior.g_mode = PriorSpec::GMode::kHalfCauchy;
    prior.g_scale = *g_half_cauchy;
  }
  if (h_beta) {
    prior.h_mode = PriorSpec::HMode::kBeta;
    prior.beta_a = h_beta->first;
    prior.beta_b = h_beta->second;
  } else {
    prior.h = h;
  }
  prior.validate();
  return prior;
}

IdealVariant variant_from_name(const std::string& name) {
  if (name == "independent" || name == "ind") return IdealVariant::kIndependent;
  if (name == "random_walk" || name == "rw") return IdealVariant::kRandomWalk;
  throw ConfigError("variant must be 'independent' or 'random_walk'");
}

py::dict run_output_to_dict(const RunOutput& out, const Dataset& data, bool return_samples) {
  const RunSummary summary = run_summary(out);
  py::dict d;
  d["pip"] = pip_empirical(out);
  if (out.rb_row_count > 0) d["pip_rb"] = pip_rb(out);
  d["acceptance_rate"] = summary.acceptance_rate;
  d["accepted_fraction"] = summary.accepted_fraction;
  d["mutation_rate"] = summary.mutation_rate;
  d["mean_model_size"] = summary.mean_model_size;
  if (summary.flips_defined) d["mean_flips_per_accepted"] = summary.mean_flips_per_accepted;
  d["n_draws"] = out.n_draws;
  d["seed"] = out.seed;
  d["numeric_rejects"] = out.numeric_rejects;
  d["total_seconds"] = out.total_seconds;
  if (out.final_zeta > 0.0) d["zeta"] = out.final_zeta;
  if (!out.final_temps.empty()) d["temperatures"] = out.final_temps;
  if (!out.zeta_trace.empty()) {
    d["zeta_trace"] = out.zeta_trace;
    d["trace_iters"] = out.trace_iters;
  }
  if (out.final_g > 0.0) d["g"] = out.final_g;
  if (return_samples) {
    py::array_t<bool> samples({static_cast<py::ssize_t>(out.n_draws),
                               static_cast<py::ssize_t>(out.n_chains),
                               static_cast<py::ssize_t>(data.p())});
    auto view = samples.mutable_unchecked<3>();
    for (py::ssize_t i = 0; i < view.shape(0); ++i)
      for (py::ssize_t c = 0; c < view.shape(1); ++c)
        for (py::ssize_t j = 0; j < view.shape(2); ++j)
          view(i, c, j) = out.sample_bit(i, static_cast<int>(c), static_cast<int>(j));
    d["samples"] = samples;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(bvsmc, m) {
  m.doc() = "Adaptive MCMC for Bayesian variable selection in linear regression";
  m.attr("__version__") = "0.1.0";

  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ParseError>(m, "CsvParseError");

  m.def(
      "simulate",
      [](int n, int p, double rho, double snr, double sigma2, std::uint64_t seed) {
        SynthSpec spec{n, p, rho, snr, sigma2, seed};
        const SyntheticData out = generate_synthetic(spec);
        py::dict d;
        d["y"] = out.dataset.y();
        d["x"] = out.dataset.x();
        d["beta_star"] = out.beta_star;
        d["active"] = out.active;
        return d;
      },
      py::arg("n"), py::arg("p"), py::arg("rho") = 0.6, py::arg("snr") = 2.0,
      py::arg("sigma2") = 1.0, py::arg("seed") = 1,
      "Synthetic benchmark data with AR(1)-correlated covariates");

  m.def(
      "run",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const std::string& algo,
         int chains, std::int64_t burnin, std::int64_t iters, std::int64_t thin,
         std::uint64_t seed, double g, double h,
         std::optional<std::pair<double, double>> h_beta, std::optional<double> g_half_cauchy,
         std::optional<int> pt, double tau, double tau_l, double tau_u, double kappa,
         double eps, bool rb_burnin_only, bool adapt_burnin_only, bool init_from_prior,
         bool rank_guard, bool return_samples, std::int64_t trace_stride) {
        Dataset data(y, x);
        const PriorSpec prior = make_prior(
            g, h > 0 ? h : std::min(0.5, 10.0 / data.p()), h_beta, g_half_cauchy);
        RunConfig config;
        config.algorithm = algorithm_from_name(algo);
        config.n_chains = chains;
        config.burn_in = burnin;
        config.n_iters = iters;
        config.thin = thin;
        config.seed = seed;
        config.tau = tau;
        config.tau_l = tau_l;
        config.tau_u = tau_u;
        config.kappa = kappa;
        config.eps = eps;
        config.rb_burnin_only = rb_burnin_only;
        config.adapt_burnin_only = adapt_burnin_only;
        config.init_from_prior = init_from_prior;
        config.rank_guard = rank_guard;
        config.trace_stride = trace_stride;
        if (pt) config.pt = PtConfig{*pt, 0.234, false};
        const RunOutput out = run_sampler(data, prior, config);
        return run_output_to_dict(out, data, return_samples);
      },
      py::arg("y"), py::arg("x"), py::arg("algo") = "asi", py::arg("chains") = 1,
      py::arg("burnin") = 1000, py::arg("iters") = 5000, py::arg("thin") = 1,
      py::arg("seed") = 1, py::arg("g") = 9.0, py::arg("h") = -1.0,
      py::arg("h_beta") = std::nullopt, py::arg("g_half_cauchy") = std::nullopt,
      py::arg("pt") = std::nullopt, py::arg("tau") = 0.234, py::arg("tau_l") = 0.01,
      py::arg("tau_u") = 0.1, py::arg("kappa") = 0.001, py::arg("eps") = -1.0,
      py::arg("rb_burnin_only") = false, py::arg("adapt_burnin_only") = false,
      py::arg("init_from_prior") = false, py::arg("rank_guard") = true,
      py::arg("return_samples") = false, py::arg("trace_stride") = 0,
      "Run the EIA, ASI or add-delete-swap sampler and return PIP estimates");

  m.def(
      "enumerate_posterior",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& x, double g, double h,
         std::optional<std::pair<double, double>> h_beta) {
        Dataset data(y, x);
        const PriorSpec prior = make_prior(
            g, h > 0 ? h : std::min(0.5, 10.0 / data.p()), h_beta, std::nullopt);
        const EnumerationResult res = enumerate_posterior(data, prior);
        py::dict d;
        d["pip"] = res.pips;
        d["log_prob"] = res.log_prob;
        d["log_evidence"] = res.log_evidence;
        return d;
      },
      py::arg("y"), py::arg("x"), py::arg("g") = 9.0, py::arg("h") = -1.0,
      py::arg("h_beta") = std::nullopt,
      "Exact posterior over all 2^p models (p <= 20)");

  m.def(
      "esjd_closed_form",
      [](const Eigen::VectorXd& pis, const std::string& variant) {
        return esjd_closed_form(ProductTarget(pis), variant_from_name(variant));
      },
      py::arg("pis"), py::arg("variant") = "random_walk");

  m.def(
      "mutation_rate_closed_form",
      [](const Eigen::VectorXd& pis, const std::string& variant) {
        return mutation_rate_closed_form(ProductTarget(pis), variant_from_name(variant));
      },
      py::arg("pis"), py::arg("variant") = "random_walk");

  m.def(
      "ess",
      [](const std::vector<double>& series) {
        const EssResult res = ess_univariate(series);
        py::dict d;
        d["ess"] = res.ess;
        d["degenerate"] = res.degenerate;
        d["capped"] = res.capped;
        return d;
      },
      py::arg("series"), "Effective sample size (initial monotone sequence estimator)");

  m.def(
      "load_csv",
      [](const std::string& path, const std::string& response, bool standardize) {
        CsvOptions opts;
        opts.response = response;
        opts.standardize = standardize;
        const Dataset data = load_csv(path, opts);
        py::dict d;
        d["y"] = data.y();
        d["x"] = data.x();
        d["names"] = data.names();
        return d;
      },
      py::arg("path"), py::arg("response") = "y", py::arg("standardize") = false);
}
