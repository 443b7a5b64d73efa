#ifndef BVSMC_DATASET_HPP_
#define BVSMC_DATASET_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace bvsmc {

// Immutable regression data with the per-column summaries every sampler
// iteration reuses: x_j^T y, x_j^T x_j, 1_n^T x_j and y^T y. Shareable
// across threads once constructed.
class Dataset {
 public:
  Dataset(Eigen::VectorXd y, Eigen::MatrixXd x,
          std::vector<std::string> names = {});

  int n() const { return static_cast<int>(x_.rows()); }
  int p() const { return static_cast<int>(x_.cols()); }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& x() const { return x_; }
  Eigen::MatrixXd::ConstColXpr column(int j) const { return x_.col(j); }

  const Eigen::VectorXd& xty() const { return xty_; }
  const Eigen::VectorXd& col_sq() const { return col_sq_; }
  const Eigen::VectorXd& col_sum() const { return col_sum_; }
  double yty() const { return yty_; }
  double y_sum() const { return y_sum_; }

  const std::vector<std::string>& names() const { return names_; }

  // Center each column and rescale to unit sample standard deviation.
  // Constant columns are centered only.
  Dataset standardized() const;

 private:
  Eigen::VectorXd y_;
  Eigen::MatrixXd x_;
  Eigen::VectorXd xty_, col_sq_, col_sum_;
  double yty_ = 0.0, y_sum_ = 0.0;
  std::vector<std::string> names_;
};

}  // namespace bvsmc

#endif  // BVSMC_DATASET_HPP_
