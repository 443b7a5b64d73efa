#ifndef BVSMC_SUFFSTATS_HPP_
#define BVSMC_SUFFSTATS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bvsmc/dataset.hpp"
#include "bvsmc/gamma_vector.hpp"
#include "bvsmc/prior.hpp"

namespace bvsmc {

// Memo of cross-product columns X^T x_j for columns that are (or were
// recently) in the model. Entries depend on the data only, so a cache can
// be shared by the current state and proposal evaluations of one chain.
// Bounded: once above 4x the peak model size, the least recently touched
// entry for a column outside the requesting model is dropped. A dropped
// entry is rebuilt on demand, so eviction never affects results.
class CrossCache {
 public:
  explicit CrossCache(const Dataset& data) : data_(&data) {}

  // X^T x_j, built on first use (one O(np) matrix-vector product). Only
  // worth materializing when the row will be read across many columns,
  // as the Rao-Blackwell sweep does.
  const Eigen::VectorXd& products(int j);

  // Cached row if present, nullptr otherwise; never builds.
  const Eigen::VectorXd* find(int j);

  // x_a^T x_b through whichever row is cached, or one direct O(n) dot.
  double pair_dot(int a, int b);

  void note_model_size(int p_gamma);
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Eigen::VectorXd v;
    std::uint64_t tick = 0;
  };

  void maybe_evict();

  const Dataset* data_;
  std::unordered_map<int, Entry> entries_;
  std::uint64_t tick_ = 0;
  int peak_model_ = 1;
};

// Workspace buffers for the vectorized Rao-Blackwell row; reusable across
// iterations of one chain.
struct RbWorkspace {
  Eigen::MatrixXd w;    // (p_gamma+1) x p gather of Z^T x_j
  Eigen::MatrixXd fw;   // F * w
  Eigen::VectorXd quad, score;
};

// Posterior sufficient statistics of one model under the conjugate prior:
// F = (Z^T Z + Lambda)^{-1} with Z = [1_n X_included] and
// Lambda = diag(0, 1/g, ..., 1/g), the residual quadratic form
// A = y^T y - y^T Z F Z^T y, and log|Z^T Z + Lambda|. Columns of Z follow
// inclusion order. Add/remove maintain everything in O(p_gamma^2) via the
// Schur-complement block update of the inverse.
class SuffStats {
 public:
  SuffStats() = default;

  // Dense from-scratch construction (LDLT factorization of the full
  // (p_gamma+1)-dimensional system).
  static SuffStats build(const Dataset& data, double g, const GammaVector& gamma);

  int p() const { return static_cast<int>(pos_.size()); }
  int p_gamma() const { return m_ - 1; }
  int dim() const { return m_; }
  double residual() const { return a_; }
  double log_det() const { return logdet_; }
  double g() const { return g_; }
  bool includes(int j) const { return pos_[j] >= 0; }
  const std::vector<std::int32_t>& included() const { return z_; }

  // log m(gamma) = -1/2 log|Z^T Z + Lambda| - (p_gamma/2) log g - (n/2) log A.
  double log_marginal(int n) const;

  // Include column j (gamma_j = 0 -> 1). Throws NumericalError when the
  // Schur complement d_up is numerically zero or the updated residual is
  // non-positive.
  void add_column(const Dataset& data, CrossCache& cache, int j);

  // Exclude column j (gamma_j = 1 -> 0).
  void remove_column(int j);

  // log Bayes factor for including j, evaluated without mutating state.
  // log_bf_up requires j excluded; log_bf_down requires j included. Both
  // return log[m(gamma_j=1) / m(gamma_j=0)] given the other coordinates.
  double log_bf_up(const Dataset& data, CrossCache& cache, int j) const;
  double log_bf_down(const Dataset& data, int j) const;

  // p(gamma_j = 1 | gamma_{-j}, y) for every j. Numerical failures in a
  // coordinate saturate it to 0 or 1; the count of such coordinates is
  // returned.
  int rao_blackwell_row(const Dataset& data, CrossCache& cache, const PriorSpec& prior,
                        RbWorkspace& ws, Eigen::VectorXd& out) const;

  // Overwrite with o's state, reusing existing buffers when possible.
  void assign_from(const SuffStats& o);

  Eigen::MatrixXd f_dense() const { return f_.topLeftCorner(m_, m_); }
  Eigen::VectorXd zty_dense() const { return zty_.head(m_); }

 private:
  void ensure_capacity(int m);
  void refresh_fzty();
  // Schur pivot for including column j plus the score s = y^T x_j -
  // y^T Z F Z^T x_j; shared by add_column and log_bf_up.
  void up_terms(const Dataset& data, CrossCache& cache, int j, double* d_up,
                double* score) const;

  int m_ = 0;          // p_gamma + 1
  double g_ = 1.0;
  double a_ = 0.0;     // residual quadratic form A
  double logdet_ = 0.0;
  Eigen::MatrixXd f_;
  Eigen::VectorXd zty_;   // Z^T y
  Eigen::VectorXd fzty_;  // F Z^T y, kept in sync
  std::vector<std::int32_t> z_;    // included columns, inclusion order
  std::vector<std::int32_t> pos_;  // position in z_, -1 when excluded
  mutable Eigen::VectorXd wbuf_, fwbuf_;
};

// Marginal likelihood p(y | gamma) with the coefficient block, intercept
// and noise variance integrated out; built from scratch.
std::pair<double, SuffStats> log_marginal_likelihood(const Dataset& data,
                                                     const PriorSpec& prior,
                                                     const GammaVector& gamma);

}  // namespace bvsmc

#endif  // BVSMC_SUFFSTATS_HPP_
