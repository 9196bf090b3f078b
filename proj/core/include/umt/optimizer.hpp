#pragma once

#include <cstdint>
#include <vector>

#include "umt/tensor.hpp"

namespace umt {

struct AdamOptions {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
};

// Adaptive-moment optimizer with bias correction. Holds handles to the
// parameters it updates; moments are allocated per parameter on construction.
template <class Real>
class Adam {
 public:
  Adam(std::vector<NamedParameter<Real>> params, AdamOptions options = {});

  // Applies one update from the accumulated grads, then zeroes them.
  // Throws std::logic_error naming the first parameter that has no grad.
  void step();
  void zero_grad();

  std::int64_t steps() const { return step_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

  std::span<const Real> first_moment(std::size_t i) const { return m_.at(i); }
  std::span<const Real> second_moment(std::size_t i) const { return v_.at(i); }

 private:
  std::vector<NamedParameter<Real>> params_;
  AdamOptions options_;
  std::vector<std::vector<Real>> m_;
  std::vector<std::vector<Real>> v_;
  std::int64_t step_ = 0;
};

}  // namespace umt
