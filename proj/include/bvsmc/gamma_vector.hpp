#ifndef BVSMC_GAMMA_VECTOR_HPP_
#define BVSMC_GAMMA_VECTOR_HPP_

#include <cstdint>
#include <vector>

#include "bvsmc/errors.hpp"

namespace bvsmc {

// Binary inclusion vector over p candidate variables. Keeps the list of
// included column indices in inclusion order (the order in which columns
// entered the model), which is the column order of the working design
// matrix and therefore of the sufficient-statistics matrix F.
class GammaVector {
 public:
  explicit GammaVector(int p) : bits_(p, 0), pos_(p, -1) {}

  int p() const { return static_cast<int>(bits_.size()); }
  int count() const { return static_cast<int>(z_.size()); }
  bool test(int j) const { return bits_[j] != 0; }

  // Position of j in the inclusion order, -1 if excluded.
  int position_of(int j) const { return pos_[j]; }

  const std::vector<std::int32_t>& included() const { return z_; }

  void set(int j) {
    if (bits_[j]) throw ConfigError("variable already included");
    bits_[j] = 1;
    pos_[j] = static_cast<std::int32_t>(z_.size());
    z_.push_back(j);
  }

  void clear(int j) {
    if (!bits_[j]) throw ConfigError("variable not included");
    const int q = pos_[j];
    z_.erase(z_.begin() + q);
    for (std::size_t k = q; k < z_.size(); ++k) pos_[z_[k]] = static_cast<std::int32_t>(k);
    bits_[j] = 0;
    pos_[j] = -1;
  }

  bool operator==(const GammaVector& o) const { return bits_ == o.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
  std::vector<std::int32_t> z_;    // included indices, inclusion order
  std::vector<std::int32_t> pos_;  // pos_[j] = index into z_, -1 if excluded
};

}  // namespace bvsmc

#endif  // BVSMC_GAMMA_VECTOR_HPP_
