#ifndef BVSMC_SYNTHETIC_HPP_
#define BVSMC_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "bvsmc/dataset.hpp"

namespace bvsmc {

// Synthetic benchmark design: rows x_i ~ N(0, Sigma) with
// Sigma_{jk} = rho^{|j-k|}, y = X beta* + e, e ~ N(0, sigma2 I), and
// beta* = snr * sqrt(sigma2 log(p) / n) * (2,-3,2,2,-3,3,-2,3,-2,3,0,...).
struct SynthSpec {
  int n = 500;
  int p = 500;
  double rho = 0.6;
  double snr = 2.0;
  double sigma2 = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticData {
  Dataset dataset;
  Eigen::VectorXd beta_star;
  std::vector<int> active;  // 0-based indices of the nonzero coefficients
};

// The AR(1) recursion x_{i,1} = z_1, x_{i,j} = rho x_{i,j-1} +
// sqrt(1-rho^2) z_j realizes the banded covariance exactly in O(np).
// Deterministic given the seed: all draws come from one dedicated
// substream, X row-major first, then the noise vector.
SyntheticData generate_synthetic(const SynthSpec& spec);

}  // namespace bvsmc

#endif  // BVSMC_SYNTHETIC_HPP_
