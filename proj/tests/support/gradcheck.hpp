#pragma once

// Central finite-difference gradient checks in double precision.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "umt/tensor.hpp"

namespace umt::fixtures {

struct GradCheckResult {
  double max_rel_error = 0;
  std::string worst;  // "name[index]: analytic vs numeric"
  std::size_t checked = 0;
  std::size_t kinks = 0;  // coordinates set aside as ReLU kink crossings
};

// A ReLU kink inside [x - h, x + h] spoils the central difference at h but
// not at a much smaller step; a wrong analytic gradient fails at both.
struct KinkRule {
  double small_h = 0;  // 0 disables the rule
  double tolerance = 0;
};

inline double relative_error(double a, double n, double floor) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

// `loss` rebuilds the graph from the current parameter values and returns a
// scalar. Up to `per_param` coordinates of each parameter are sampled with
// `rng` (all of them when the tensor is smaller).
inline GradCheckResult gradcheck(const std::function<Tensor<double>()>& loss,
                                 std::vector<NamedParameter<double>> params, std::mt19937_64& rng,
                                 std::size_t per_param = 6, double h = 1e-5,
                                 double floor = 1e-5, KinkRule kink = {}) {
  for (auto& p : params) p.tensor.clear_grad();
  backward(loss());
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) {
    if (p.tensor.has_grad())
      analytic.emplace_back(p.tensor.grad().begin(), p.tensor.grad().end());
    else
      analytic.emplace_back(p.tensor.size(), 0.0);
  }
  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor<double> t = params[k].tensor;
    std::vector<std::size_t> coords(t.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (coords.size() > per_param) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(per_param);
    }
    auto central = [&](std::size_t i, double step) {
      const double saved = t.data()[i];
      t.mutable_data()[i] = saved + step;
      const double up = loss().item();
      t.mutable_data()[i] = saved - step;
      const double down = loss().item();
      t.mutable_data()[i] = saved;
      return (up - down) / (2 * step);
    };
    for (std::size_t i : coords) {
      const double numeric = central(i, h);
      const double err = relative_error(analytic[k][i], numeric, floor);
      if (kink.small_h > 0 && err >= kink.tolerance &&
          relative_error(analytic[k][i], central(i, kink.small_h), floor) < kink.tolerance) {
        ++result.kinks;
        continue;
      }
      ++result.checked;
      if (err >= result.max_rel_error) {
        result.max_rel_error = err;
        std::ostringstream w;
        w.precision(6);
        w << params[k].name << '[' << i << "]: " << analytic[k][i] << " vs " << numeric;
        result.worst = w.str();
      }
    }
  }
  for (auto& p : params) p.tensor.clear_grad();
  return result;
}

inline Tensor<double> random_tensor(const Shape& shape, std::mt19937_64& rng, double lo = -1,
                                    double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(numel(shape));
  for (auto& x : v) x = u(rng);
  return Tensor<double>::from(shape, std::move(v), true);
}

}  // namespace umt::fixtures
