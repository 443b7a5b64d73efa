#include "bvsmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvsmc/errors.hpp"

namespace bvsmc {

Eigen::VectorXd pip_empirical(const RunOutput& out) {
  if (out.n_draws <= 0) throw ConfigError("pip_empirical: no recorded draws");
  Eigen::VectorXd pips = Eigen::VectorXd::Zero(out.p);
  const std::int64_t total = out.n_draws * out.n_chains;
  for (std::int64_t d = 0; d < out.n_draws; ++d)
    for (int c = 0; c < out.n_chains; ++c)
      for (int j = 0; j < out.p; ++j)
        if (out.sample_bit(d, c, j)) pips[j] += 1.0;
  return pips / static_cast<double>(total);
}

Eigen::VectorXd pip_rb(const RunOutput& out) {
  if (out.rb_row_count <= 0) throw ConfigError("pip_rb: no Rao-Blackwell rows recorded");
  return out.rb_row_mean;
}

EssResult ess_univariate(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw ConfigError("ess_univariate needs at least 10 points");
  const double nn = static_cast<double>(n);

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= nn;

  double c0 = 0.0;
  for (double v : series) c0 += (v - mean) * (v - mean);
  c0 /= nn;
  if (c0 <= 1e-24 * (1.0 + mean * mean)) return {nn, true, false};

  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t)
      s += (series[t] - mean) * (series[t + lag] - mean);
    return s / nn;
  };

  // Geyer initial monotone sequence: sum positive, decreasing pair sums.
  double var_est = -c0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double pair = autocov(2 * m) + autocov(2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    var_est += 2.0 * pair;
    prev_pair = pair;
  }

  EssResult res;
  if (var_est < 0.1 * c0) {
    res.ess = 10.0 * nn;  // antithetic series; cap
    res.capped = true;
    return res;
  }
  res.ess = nn * c0 / var_est;
  if (res.ess > 10.0 * nn) {
    res.ess = 10.0 * nn;
    res.capped = true;
  }
  return res;
}

Eigen::VectorXd relative_efficiency(const Eigen::VectorXd& var_a, double time_a,
                                    const Eigen::VectorXd& var_b, double time_b) {
  if (var_a.size() != var_b.size())
    throw ConfigError("relative_efficiency: dimension mismatch");
  if (time_a <= 0.0 || time_b <= 0.0)
    throw ConfigError("relative_efficiency: run times must be positive");
  Eigen::VectorXd r(var_a.size());
  for (int j = 0; j < var_a.size(); ++j) {
    if (var_a[j] == 0.0 && var_b[j] == 0.0)
      r[j] = time_b / time_a;
    else if (var_a[j] == 0.0)
      r[j] = std::numeric_limits<double>::infinity();
    else
      r[j] = (var_b[j] * time_b) / (var_a[j] * time_a);
  }
  return r;
}

Eigen::VectorXd replicate_variance(const Eigen::MatrixXd& rows) {
  const int r = static_cast<int>(rows.rows());
  if (r < 2) throw ConfigError("replicate_variance needs at least 2 replicates");
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  return (rows.rowwise() - mean).colwise().squaredNorm().transpose() / (r - 1.0);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of empty vector");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
  return 0.5 * (values[mid - 1] + hi);
}

RunSummary run_summary(const RunOutput& out) {
  if (out.accept_series.empty()) throw ConfigError("run_summary: empty output");
  RunSummary s;
  s.n_steps = static_cast<std::int64_t>(out.accept_series.size());

  double sum_a = 0.0, sum_size = 0.0;
  std::int64_t n_accepted = 0, n_mutations = 0, flips = 0, changers = 0;
  for (std::size_t i = 0; i < out.accept_series.size(); ++i) {
    sum_a += out.accept_series[i];
    sum_size += out.model_size[i];
    if (out.accepted[i]) {
      ++n_accepted;
      if (out.n_proposed[i] > 0) {
        ++n_mutations;
        flips += out.n_proposed[i];
        ++changers;
      }
    }
  }
  const double n = static_cast<double>(s.n_steps);
  s.acceptance_rate = sum_a / n;
  s.accepted_fraction = static_cast<double>(n_accepted) / n;
  s.mutation_rate = static_cast<double>(n_mutations) / n;
  s.mean_model_size = sum_size / n;
  if (changers > 0) {
    s.mean_flips_per_accepted = static_cast<double>(flips) / changers;
    s.flips_defined = true;
  } else {
    s.mean_flips_per_accepted = std::numeric_limits<double>::quiet_NaN();
  }
  s.numeric_rejects = out.numeric_rejects;
  s.rb_warnings = out.rb_warnings;
  s.burn_seconds = out.burn_seconds;
  s.main_seconds = out.main_seconds;
  s.total_seconds = out.total_seconds;
  return s;
}

}  // namespace bvsmc
