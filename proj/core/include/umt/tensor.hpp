#pragma once

// Dense tensors with define-by-run reverse-mode differentiation.
//
// Every differentiable op appends a backward closure to the thread-local
// Tape of its scalar type. `backward(loss)` replays the tape in reverse and
// then clears it. Ops executed inside a NoGradGuard scope (or whose inputs
// do not require gradients) record nothing.
//
// Two scalar types are instantiated: float for training and double for
// finite-difference gradient checks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace umt {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string shape_str(const Shape& shape);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class Real>
struct TensorNode {
  Shape shape;
  std::vector<Real> value;
  std::vector<Real> grad;  // empty until the first accumulation
  bool requires_grad = false;

  void ensure_grad() {
    if (grad.empty()) grad.assign(value.size(), Real(0));
  }
};

template <class Real>
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, Real fill, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<Real> values,
                     bool requires_grad = false);
  static Tensor scalar(Real value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t dim(std::size_t axis) const { return node_->shape.at(axis); }
  std::size_t size() const { return node_->value.size(); }

  std::span<const Real> data() const { return node_->value; }
  // Parameters are updated in place by the optimizer and by checkpoint
  // loading; no other code should write through this.
  std::span<Real> mutable_data() { return node_->value; }

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const Real> grad() const { return node_->grad; }
  std::span<Real> mutable_grad() { return node_->grad; }
  void zero_grad();
  void clear_grad() { node_->grad.clear(); }

  Real item() const;
  Real at(std::size_t flat_index) const { return node_->value.at(flat_index); }

  // A new leaf sharing no storage with this tensor.
  Tensor detach() const;

  TensorNode<Real>* node() const { return node_.get(); }
  const std::shared_ptr<TensorNode<Real>>& node_ptr() const { return node_; }

  explicit Tensor(std::shared_ptr<TensorNode<Real>> node)
      : node_(std::move(node)) {}

 private:
  std::shared_ptr<TensorNode<Real>> node_;
};

// Counts nesting of no-grad scopes on this thread; shared by both scalar
// types so model code needs a single guard.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

  static bool grad_enabled();
};

template <class Real>
class Tape {
 public:
  static Tape& active();

  void record(std::function<void()> backward_fn);
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  // Seeds d(loss)/d(loss) = 1, runs every recorded closure in reverse
  // order, then clears the tape.
  void backward(const Tensor<Real>& loss);

 private:
  std::vector<std::function<void()>> entries_;
};

template <class Real>
void backward(const Tensor<Real>& loss) {
  Tape<Real>::active().backward(loss);
}

template <class Real>
struct NamedParameter {
  std::string name;
  Tensor<Real> tensor;
};

enum class Reduction { Mean, Sum };

// Elementwise with suffix broadcasting: b's shape must equal a's shape or a
// trailing suffix of it (e.g. (L,d) + (d)).
template <class Real> Tensor<Real> add(const Tensor<Real>& a, const Tensor<Real>& b);
template <class Real> Tensor<Real> mul(const Tensor<Real>& a, const Tensor<Real>& b);
template <class Real> Tensor<Real> scale(const Tensor<Real>& a, Real factor);
template <class Real> Tensor<Real> relu(const Tensor<Real>& a);
template <class Real> Tensor<Real> sum(const Tensor<Real>& a);

template <class Real> Tensor<Real> matmul(const Tensor<Real>& a, const Tensor<Real>& b);
template <class Real> Tensor<Real> transpose(const Tensor<Real>& a);
template <class Real> Tensor<Real> reshape(const Tensor<Real>& a, Shape shape);
template <class Real>
Tensor<Real> concat(const std::vector<Tensor<Real>>& parts, std::size_t axis);
template <class Real>
Tensor<Real> slice(const Tensor<Real>& a, std::size_t axis, std::size_t begin,
                   std::size_t end);

template <class Real> Tensor<Real> softmax(const Tensor<Real>& a, std::size_t axis);
// Normalizes over the last axis, then applies gamma * x + beta.
template <class Real>
Tensor<Real> layer_norm(const Tensor<Real>& x, const Tensor<Real>& gamma,
                        const Tensor<Real>& beta, Real eps = Real(1e-5));

// Rows of `table` selected by `ids`; result shape (ids.size(), table.dim(1)).
template <class Real>
Tensor<Real> embedding(const Tensor<Real>& table, std::span<const int> ids);

// Softmax cross-entropy of logits (N, V) against N target ids. Positions whose
// target equals `ignore_id` contribute nothing; Mean divides by the number of
// counted positions (0 when none are counted).
template <class Real>
Tensor<Real> cross_entropy(const Tensor<Real>& logits, std::span<const int> targets,
                           int ignore_id, Reduction reduction = Reduction::Mean);

}  // namespace umt
