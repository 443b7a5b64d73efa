#include "bvsmc/suffstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvsmc/errors.hpp"

namespace bvsmc {

namespace {
constexpr double kSingularTol = 1e-12;
constexpr double kConditionLimit = 1e14;

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}
}  // namespace

const Eigen::VectorXd& CrossCache::products(int j) {
  auto it = entries_.find(j);
  if (it == entries_.end()) {
    maybe_evict();
    Entry e;
    e.v.noalias() = data_->x().transpose() * data_->x().col(j);
    it = entries_.emplace(j, std::move(e)).first;
  }
  it->second.tick = ++tick_;
  return it->second.v;
}

const Eigen::VectorXd* CrossCache::find(int j) {
  auto it = entries_.find(j);
  if (it == entries_.end()) return nullptr;
  it->second.tick = ++tick_;
  return &it->second.v;
}

double CrossCache::pair_dot(int a, int b) {
  if (const Eigen::VectorXd* row = find(a)) return (*row)[b];
  if (const Eigen::VectorXd* row = find(b)) return (*row)[a];
  return data_->x().col(a).dot(data_->x().col(b));
}

void CrossCache::note_model_size(int p_gamma) {
  if (p_gamma > peak_model_) peak_model_ = p_gamma;
}

void CrossCache::maybe_evict() {
  const std::size_t cap =
      std::max<std::size_t>(32, 4 * static_cast<std::size_t>(peak_model_));
  if (entries_.size() < cap) return;
  auto victim = entries_.end();
  std::uint64_t oldest = UINT64_MAX;
  for (auto it = entries_.begin(); it != entries_.end(); ++it) {
    if (it->second.tick < oldest) {
      oldest = it->second.tick;
      victim = it;
    }
  }
  if (victim != entries_.end()) entries_.erase(victim);
}

SuffStats SuffStats::build(const Dataset& data, double g, const GammaVector& gamma) {
  if (g <= 0.0) throw ConfigError("g must be positive");
  const int pg = gamma.count();
  const int m = pg + 1;
  const int n = data.n();

  SuffStats s;
  s.g_ = g;
  s.m_ = m;
  s.pos_.assign(data.p(), -1);
  s.z_.assign(gamma.included().begin(), gamma.included().end());
  for (int q = 0; q < pg; ++q) s.pos_[s.z_[q]] = q;
  s.ensure_capacity(m);

  Eigen::MatrixXd xz(n, pg);
  for (int q = 0; q < pg; ++q) xz.col(q) = data.column(s.z_[q]);

  Eigen::MatrixXd mat(m, m);
  mat(0, 0) = static_cast<double>(n);
  for (int q = 0; q < pg; ++q) {
    mat(0, q + 1) = data.col_sum()[s.z_[q]];
    mat(q + 1, 0) = mat(0, q + 1);
  }
  if (pg > 0) {
    mat.bottomRightCorner(pg, pg).noalias() = xz.transpose() * xz;
    mat.bottomRightCorner(pg, pg).diagonal().array() += 1.0 / g;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(mat);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("LDLT factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  if (dmin <= 0.0 || dmax / dmin > kConditionLimit)
    throw NumericalError("Z^T Z + Lambda numerically singular");

  s.f_.topLeftCorner(m, m) = ldlt.solve(Eigen::MatrixXd::Identity(m, m));
  // LDLT.solve can leave tiny asymmetries; the incremental updates assume
  // an exactly symmetric F.
  s.f_.topLeftCorner(m, m) =
      0.5 * (s.f_.topLeftCorner(m, m) + s.f_.topLeftCorner(m, m).transpose()).eval();
  s.logdet_ = d.array().log().sum();

  s.zty_[0] = data.y_sum();
  for (int q = 0; q < pg; ++q) s.zty_[q + 1] = data.xty()[s.z_[q]];
  s.refresh_fzty();

  s.a_ = data.yty() - s.zty_.head(m).dot(s.fzty_.head(m));
  if (s.a_ <= kSingularTol * data.yty())
    throw NumericalError("degenerate fit: residual quadratic form not positive");
  return s;
}

void SuffStats::ensure_capacity(int m) {
  if (f_.rows() >= m) return;
  const int keep = std::min(m_, static_cast<int>(f_.rows()));
  const int cap = std::max(8, 2 * m);
  Eigen::MatrixXd f_new = Eigen::MatrixXd::Zero(cap, cap);
  if (keep > 0) f_new.topLeftCorner(keep, keep) = f_.topLeftCorner(keep, keep);
  f_.swap(f_new);
  Eigen::VectorXd v_new = Eigen::VectorXd::Zero(cap);
  if (keep > 0) v_new.head(keep) = zty_.head(keep);
  zty_.swap(v_new);
  fzty_.conservativeResize(cap);
  wbuf_.conservativeResize(cap);   // add_column grows capacity while its
  fwbuf_.conservativeResize(cap);  // pivot terms live in these buffers
}

void SuffStats::refresh_fzty() {
  if (m_ > 0)
    fzty_.head(m_).noalias() = f_.topLeftCorner(m_, m_) * zty_.head(m_);
}

double SuffStats::log_marginal(int n) const {
  return -0.5 * logdet_ - 0.5 * (m_ - 1) * std::log(g_) - 0.5 * n * std::log(a_);
}

void SuffStats::up_terms(const Dataset& data, CrossCache& cache, int j, double* d_up,
                         double* score) const {
  const int m = m_;
  wbuf_[0] = data.col_sum()[j];
  for (int q = 0; q < m - 1; ++q) wbuf_[q + 1] = cache.pair_dot(z_[q], j);
  fwbuf_.head(m).noalias() = f_.topLeftCorner(m, m) * wbuf_.head(m);
  *d_up = data.col_sq()[j] + 1.0 / g_ - wbuf_.head(m).dot(fwbuf_.head(m));
  *score = data.xty()[j] - zty_.head(m).dot(fwbuf_.head(m));
}

void SuffStats::add_column(const Dataset& data, CrossCache& cache, int j) {
  if (pos_[j] >= 0) throw ConfigError("add_column: variable already included");
  double d_up, score;
  up_terms(data, cache, j, &d_up, &score);
  if (d_up <= kSingularTol * (data.col_sq()[j] + 1.0 / g_))
    throw NumericalError("near-singular pivot when including column");
  const double a_new = a_ - score * score / d_up;
  if (a_new <= kSingularTol * data.yty())
    throw NumericalError("degenerate fit: residual quadratic form not positive");

  const int m = m_;
  ensure_capacity(m + 1);
  auto f = f_.topLeftCorner(m, m);
  f.noalias() += fwbuf_.head(m) * fwbuf_.head(m).transpose() / d_up;
  f_.col(m).head(m) = -fwbuf_.head(m) / d_up;
  f_.row(m).head(m) = f_.col(m).head(m).transpose();
  f_(m, m) = 1.0 / d_up;

  zty_[m] = data.xty()[j];
  logdet_ += std::log(d_up);
  a_ = a_new;
  pos_[j] = m - 1;
  z_.push_back(j);
  m_ = m + 1;
  refresh_fzty();
  cache.note_model_size(m_ - 1);
}

void SuffStats::remove_column(int j) {
  const int q = pos_[j];
  if (q < 0) throw ConfigError("remove_column: variable not included");
  const int m = m_;
  const int r = q + 1;
  const double frr = f_(r, r);
  if (frr <= 0.0) throw NumericalError("inconsistent state: F pivot not positive");

  const double t = fzty_[r];
  a_ += t * t / frr;
  logdet_ += std::log(frr);

  wbuf_.head(m) = f_.col(r).head(m);
  f_.topLeftCorner(m, m).noalias() -=
      wbuf_.head(m) * (wbuf_.head(m) / frr).transpose();

  // compact out row/column r
  const int tail = m - 1 - r;
  if (tail > 0) {
    f_.block(r, 0, tail, m) = f_.block(r + 1, 0, tail, m).eval();
    f_.block(0, r, m - 1, tail) = f_.block(0, r + 1, m - 1, tail).eval();
    for (int k = r; k < m - 1; ++k) zty_[k] = zty_[k + 1];
  }

  z_.erase(z_.begin() + q);
  for (std::size_t k = q; k < z_.size(); ++k) pos_[z_[k]] = static_cast<std::int32_t>(k);
  pos_[j] = -1;
  m_ = m - 1;
  refresh_fzty();
}

double SuffStats::log_bf_up(const Dataset& data, CrossCache& cache, int j) const {
  if (pos_[j] >= 0) throw ConfigError("log_bf_up: variable already included");
  double d_up, score;
  up_terms(data, cache, j, &d_up, &score);
  if (d_up <= kSingularTol * (data.col_sq()[j] + 1.0 / g_))
    throw NumericalError("near-singular pivot in Bayes factor");
  const double ratio = score * score / (d_up * a_);
  if (ratio >= 1.0)
    throw NumericalError("Bayes factor breakdown: non-positive residual ratio");
  return -0.5 * std::log(d_up) - 0.5 * std::log(g_) -
         0.5 * data.n() * std::log1p(-ratio);
}

double SuffStats::log_bf_down(const Dataset& data, int j) const {
  const int q = pos_[j];
  if (q < 0) throw ConfigError("log_bf_down: variable not included");
  const int r = q + 1;
  const double frr = f_(r, r);
  if (frr <= 0.0) throw NumericalError("Bayes factor breakdown: F pivot not positive");
  const double t = fzty_[r];
  return 0.5 * std::log(frr) - 0.5 * std::log(g_) +
         0.5 * data.n() * std::log1p(t * t / (frr * a_));
}

int SuffStats::rao_blackwell_row(const Dataset& data, CrossCache& cache,
                                 const PriorSpec& prior, RbWorkspace& ws,
                                 Eigen::VectorXd& out) const {
  const int p = data.p();
  const int n = data.n();
  const int m = m_;
  const int pg = m - 1;
  out.resize(p);

  if (ws.w.rows() < m || ws.w.cols() != p) {
    ws.w.resize(std::max<int>(m, 8), p);
    ws.fw.resize(std::max<int>(m, 8), p);
  }
  // touch every included entry first so later inserts cannot evict one
  // (the cache holds at least 4x p_gamma entries)
  for (int q = 0; q < pg; ++q) cache.products(z_[q]);
  ws.w.row(0) = data.col_sum().transpose();
  for (int q = 0; q < pg; ++q) ws.w.row(q + 1) = cache.products(z_[q]).transpose();

  auto w = ws.w.topRows(m);
  auto fw = ws.fw.topRows(m);
  fw.noalias() = f_.topLeftCorner(m, m) * w;
  ws.quad = (w.array() * fw.array()).colwise().sum().transpose();
  ws.score.resize(p);
  ws.score.noalias() = fw.transpose() * zty_.head(m);
  ws.score = data.xty() - ws.score;

  const double log_g = std::log(g_);
  const double h_out = conditional_h(p, pg, prior);      // j excluded: all pg others in
  const double h_in = conditional_h(p, pg - 1, prior);   // j included
  const double logit_h_out = std::log(h_out) - std::log1p(-h_out);
  const double logit_h_in = std::log(h_in) - std::log1p(-h_in);

  int warnings = 0;
  for (int j = 0; j < p; ++j) {
    double log_bf;
    if (pos_[j] < 0) {
      const double d_up = data.col_sq()[j] + 1.0 / g_ - ws.quad[j];
      if (d_up <= kSingularTol * (data.col_sq()[j] + 1.0 / g_)) {
        ++warnings;
        out[j] = 0.0;
        continue;
      }
      const double s = ws.score[j];
      const double ratio = s * s / (d_up * a_);
      if (ratio >= 1.0) {
        ++warnings;
        out[j] = 1.0;
        continue;
      }
      log_bf = -0.5 * std::log(d_up) - 0.5 * log_g - 0.5 * n * std::log1p(-ratio);
      out[j] = logistic(log_bf + logit_h_out);
    } else {
      const int r = pos_[j] + 1;
      const double frr = f_(r, r);
      if (frr <= 0.0) {
        ++warnings;
        out[j] = 1.0;
        continue;
      }
      const double t = fzty_[r];
      log_bf = 0.5 * std::log(frr) - 0.5 * log_g +
               0.5 * n * std::log1p(t * t / (frr * a_));
      out[j] = logistic(log_bf + logit_h_in);
    }
  }
  return warnings;
}

void SuffStats::assign_from(const SuffStats& o) {
  g_ = o.g_;
  a_ = o.a_;
  logdet_ = o.logdet_;
  m_ = o.m_;
  if (f_.rows() < o.m_) {
    const int cap = std::max(8, 2 * o.m_);
    f_.setZero(cap, cap);
    zty_.setZero(cap);
    fzty_.resize(cap);
    wbuf_.resize(cap);
    fwbuf_.resize(cap);
  }
  f_.topLeftCorner(m_, m_) = o.f_.topLeftCorner(m_, m_);
  zty_.head(m_) = o.zty_.head(m_);
  fzty_.head(m_) = o.fzty_.head(m_);
  z_ = o.z_;
  pos_ = o.pos_;
}

std::pair<double, SuffStats> log_marginal_likelihood(const Dataset& data,
                                                     const PriorSpec& prior,
                                                     const GammaVector& gamma) {
  SuffStats s = SuffStats::build(data, prior.g, gamma);
  return {s.log_marginal(data.n()), std::move(s)};
}

}  // namespace bvsmc
