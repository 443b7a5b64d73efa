#include "bvsmc/dataset.hpp"

#include <cmath>

#include "bvsmc/errors.hpp"

namespace bvsmc {

Dataset::Dataset(Eigen::VectorXd y, Eigen::MatrixXd x, std::vector<std::string> names)
    : y_(std::move(y)), x_(std::move(x)), names_(std::move(names)) {
  if (x_.rows() != y_.size()) throw ConfigError("response / design row mismatch");
  if (x_.rows() < 2) throw ConfigError("need at least two observations");
  if (x_.cols() < 1) throw ConfigError("need at least one covariate");
  if (!y_.allFinite() || !x_.allFinite()) throw ConfigError("non-finite values in data");

  xty_ = x_.transpose() * y_;
  col_sq_ = x_.colwise().squaredNorm();
  col_sum_ = x_.colwise().sum();
  yty_ = y_.squaredNorm();
  y_sum_ = y_.sum();

  if (names_.empty()) {
    names_.reserve(x_.cols());
    for (int j = 0; j < x_.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  } else if (static_cast<int>(names_.size()) != x_.cols()) {
    throw ConfigError("column name count mismatch");
  }
}

Dataset Dataset::standardized() const {
  Eigen::MatrixXd xs = x_;
  const double nn = static_cast<double>(n());
  for (int j = 0; j < xs.cols(); ++j) {
    const double mean = col_sum_[j] / nn;
    xs.col(j).array() -= mean;
    const double sd = std::sqrt(xs.col(j).squaredNorm() / (nn - 1.0));
    if (sd > 0.0) xs.col(j) /= sd;
  }
  return Dataset(y_, std::move(xs), names_);
}

}  // namespace bvsmc
