#ifndef BVSMC_DIAGNOSTICS_HPP_
#define BVSMC_DIAGNOSTICS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "bvsmc/run.hpp"

namespace bvsmc {

// Coordinate means of the thinned gamma draws.
Eigen::VectorXd pip_empirical(const RunOutput& output);

// Mean of the accumulated Rao-Blackwell rows.
Eigen::VectorXd pip_rb(const RunOutput& output);

struct EssResult {
  double ess = 0.0;
  bool degenerate = false;  // constant series
  bool capped = false;      // antithetic series capped at 10 N
};

// Effective sample size via Geyer's initial-monotone-sequence estimator
// on the sample autocovariances.
EssResult ess_univariate(std::span<const double> series);

// Per-variable relative time-standardized efficiency of algorithm A over
// algorithm B: r_j = (s^2_{B,j} t_B) / (s^2_{A,j} t_A) from replicate
// variances of the PIP estimates and median run times. Zero variance in A
// with positive variance in B yields +inf; zero variance on both sides
// reduces to the time ratio.
Eigen::VectorXd relative_efficiency(const Eigen::VectorXd& var_a, double time_a,
                                    const Eigen::VectorXd& var_b, double time_b);

// Sample variance of each column over replicate rows.
Eigen::VectorXd replicate_variance(const Eigen::MatrixXd& replicate_rows);

double median(std::vector<double> values);

struct RunSummary {
  std::int64_t n_steps = 0;
  double acceptance_rate = 0.0;    // mean of the computed a_i
  double accepted_fraction = 0.0;  // fraction of accepted steps
  double mutation_rate = 0.0;      // accepted steps that changed the model
  double mean_model_size = 0.0;
  double mean_flips_per_accepted = 0.0;  // over accepted model-changing steps
  bool flips_defined = false;
  std::int64_t numeric_rejects = 0;
  std::int64_t rb_warnings = 0;
  double burn_seconds = 0.0, main_seconds = 0.0, total_seconds = 0.0;
};

RunSummary run_summary(const RunOutput& output);

}  // namespace bvsmc

#endif  // BVSMC_DIAGNOSTICS_HPP_
