#include "bvsmc/synthetic.hpp"

#include <cmath>

#include "bvsmc/errors.hpp"
#include "bvsmc/rng.hpp"

namespace bvsmc {

void SynthSpec::validate() const {
  if (n < 2) throw ConfigError("need n >= 2");
  if (p < 10) throw ConfigError("the beta* template has 10 nonzeros; need p >= 10");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("need 0 <= rho < 1");
  if (snr <= 0.0) throw ConfigError("need snr > 0");
  if (sigma2 <= 0.0) throw ConfigError("need sigma2 > 0");
}

SyntheticData generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  static constexpr double kTemplate[10] = {2, -3, 2, 2, -3, 3, -2, 3, -2, 3};

  Rng rng(spec.seed, 0);  // data substream
  Eigen::MatrixXd x(spec.n, spec.p);
  const double carry = std::sqrt(1.0 - spec.rho * spec.rho);
  for (int i = 0; i < spec.n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (int j = 1; j < spec.p; ++j) {
      prev = spec.rho * prev + carry * rng.normal();
      x(i, j) = prev;
    }
  }

  const double scale =
      spec.snr * std::sqrt(spec.sigma2 * std::log(static_cast<double>(spec.p)) / spec.n);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.p);
  std::vector<int> active(10);
  for (int j = 0; j < 10; ++j) {
    beta[j] = scale * kTemplate[j];
    active[j] = j;
  }

  Eigen::VectorXd y = x * beta;
  const double sd = std::sqrt(spec.sigma2);
  for (int i = 0; i < spec.n; ++i) y[i] += sd * rng.normal();

  return {Dataset(std::move(y), std::move(x)), std::move(beta), std::move(active)};
}

}  // namespace bvsmc
