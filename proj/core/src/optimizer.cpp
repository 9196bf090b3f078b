#include "umt/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace umt {

template <class Real>
Adam<Real>::Adam(std::vector<NamedParameter<Real>> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    if (!p.tensor.requires_grad())
      throw std::invalid_argument("Adam: parameter '" + p.name + "' does not require grad");
    m_.emplace_back(p.tensor.size(), Real(0));
    v_.emplace_back(p.tensor.size(), Real(0));
  }
}

template <class Real>
void Adam<Real>::step() {
  for (const auto& p : params_)
    if (!p.tensor.has_grad())
      throw std::logic_error("Adam: parameter '" + p.name + "' has no gradient");
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const Real lr = static_cast<Real>(options_.lr);
  const Real eps = static_cast<Real>(options_.eps);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& t = params_[i].tensor;
    auto value = t.mutable_data();
    auto grad = t.mutable_grad();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < value.size(); ++j) {
      const Real g = grad[j];
      m[j] = static_cast<Real>(b1) * m[j] + static_cast<Real>(1.0 - b1) * g;
      v[j] = static_cast<Real>(b2) * v[j] + static_cast<Real>(1.0 - b2) * g * g;
      const Real mhat = m[j] / static_cast<Real>(c1);
      const Real vhat = v[j] / static_cast<Real>(c2);
      value[j] -= lr * mhat / (std::sqrt(vhat) + eps);
      grad[j] = Real(0);
    }
  }
}

template <class Real>
void Adam<Real>::zero_grad() {
  for (auto& p : params_)
    if (p.tensor.has_grad()) p.tensor.zero_grad();
}

template class Adam<float>;
template class Adam<double>;

}  // namespace umt
