#include "umt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kernels.hpp"

namespace umt {

std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ')';
  return os.str();
}

namespace {

thread_local int no_grad_depth = 0;

[[noreturn]] void shape_fail(const char* op, const Shape& a, const Shape& b,
                             const std::string& detail = {}) {
  std::string msg = std::string(op) + ": incompatible shapes " + shape_str(a) +
                    " and " + shape_str(b);
  if (!detail.empty()) msg += " (" + detail + ")";
  throw ShapeError(msg);
}

void check_shape(const Shape& shape) {
  for (auto e : shape)
    if (e == 0) throw ShapeError("tensor extents must be positive: " + shape_str(shape));
}

template <class Real>
std::shared_ptr<TensorNode<Real>> new_node(Shape shape) {
  auto node = std::make_shared<TensorNode<Real>>();
  node->value.assign(numel(shape), Real(0));
  node->shape = std::move(shape);
  return node;
}

template <class Real>
bool tracks(std::initializer_list<const Tensor<Real>*> inputs) {
  if (!NoGradGuard::grad_enabled()) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor<Real>* t) { return t->requires_grad(); });
}

// Splits a shape around `axis` into (outer, extent, inner) for strided loops.
struct AxisView {
  std::size_t outer = 1, extent = 1, inner = 1;
};

AxisView axis_view(const Shape& shape, std::size_t axis) {
  AxisView v;
  for (std::size_t i = 0; i < axis; ++i) v.outer *= shape[i];
  v.extent = shape[axis];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) v.inner *= shape[i];
  return v;
}

bool is_suffix(const Shape& full, const Shape& tail) {
  if (tail.size() > full.size()) return false;
  return std::equal(tail.begin(), tail.end(), full.end() - tail.size());
}

}  // namespace

NoGradGuard::NoGradGuard() { ++no_grad_depth; }
NoGradGuard::~NoGradGuard() { --no_grad_depth; }
bool NoGradGuard::grad_enabled() { return no_grad_depth == 0; }

// ---------------------------------------------------------------- Tensor

template <class Real>
Tensor<Real> Tensor<Real>::zeros(Shape shape, bool requires_grad) {
  return full(std::move(shape), Real(0), requires_grad);
}

template <class Real>
Tensor<Real> Tensor<Real>::full(Shape shape, Real fill, bool requires_grad) {
  check_shape(shape);
  auto node = new_node<Real>(std::move(shape));
  std::fill(node->value.begin(), node->value.end(), fill);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

template <class Real>
Tensor<Real> Tensor<Real>::from(Shape shape, std::vector<Real> values,
                                bool requires_grad) {
  check_shape(shape);
  if (values.size() != numel(shape))
    throw ShapeError("tensor data length " + std::to_string(values.size()) +
                     " does not match shape " + shape_str(shape));
  auto node = std::make_shared<TensorNode<Real>>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

template <class Real>
Tensor<Real> Tensor<Real>::scalar(Real value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

template <class Real>
void Tensor<Real>::zero_grad() {
  node_->ensure_grad();
  std::fill(node_->grad.begin(), node_->grad.end(), Real(0));
}

template <class Real>
Real Tensor<Real>::item() const {
  if (size() != 1)
    throw ShapeError("item() needs a single-element tensor, got " + shape_str(shape()));
  return node_->value[0];
}

template <class Real>
Tensor<Real> Tensor<Real>::detach() const {
  return from(shape(), node_->value, false);
}

// ------------------------------------------------------------------ Tape

template <class Real>
Tape<Real>& Tape<Real>::active() {
  thread_local Tape<Real> tape;
  return tape;
}

template <class Real>
void Tape<Real>::record(std::function<void()> backward_fn) {
  entries_.push_back(std::move(backward_fn));
}

template <class Real>
void Tape<Real>::backward(const Tensor<Real>& loss) {
  if (!loss.defined() || loss.size() != 1)
    throw ShapeError("backward: loss must be a scalar, got " +
                     (loss.defined() ? shape_str(loss.shape()) : std::string("undefined")));
  if (!loss.requires_grad())
    throw std::logic_error("backward: loss does not depend on any tensor requiring grad");
  auto* node = loss.node();
  node->ensure_grad();
  node->grad[0] += Real(1);
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) (*it)();
  entries_.clear();
}

// ------------------------------------------------------------ elementwise

template <class Real>
Tensor<Real> add(const Tensor<Real>& a, const Tensor<Real>& b) {
  if (!is_suffix(a.shape(), b.shape())) shape_fail("add", a.shape(), b.shape());
  auto out = new_node<Real>(a.shape());
  const auto& av = a.node()->value;
  const auto& bv = b.node()->value;
  const std::size_t period = bv.size();
  for (std::size_t r = 0; r < av.size(); r += period)
    for (std::size_t j = 0; j < period; ++j) out->value[r + j] = av[r + j] + bv[j];
  Tensor<Real> result(out);
  if (tracks<Real>({&a, &b})) {
    out->requires_grad = true;
    auto an = a.node_ptr(), bn = b.node_ptr();
    Tape<Real>::active().record([an, bn, out, period] {
      if (out->grad.empty()) return;
      if (an->requires_grad) {
        an->ensure_grad();
        for (std::size_t i = 0; i < out->grad.size(); ++i) an->grad[i] += out->grad[i];
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t r = 0; r < out->grad.size(); r += period)
          for (std::size_t j = 0; j < period; ++j) bn->grad[j] += out->grad[r + j];
      }
    });
  }
  return result;
}

template <class Real>
Tensor<Real> mul(const Tensor<Real>& a, const Tensor<Real>& b) {
  if (!is_suffix(a.shape(), b.shape())) shape_fail("mul", a.shape(), b.shape());
  auto out = new_node<Real>(a.shape());
  const auto& av = a.node()->value;
  const auto& bv = b.node()->value;
  const std::size_t period = bv.size();
  for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] * bv[i % period];
  if (tracks<Real>({&a, &b})) {
    out->requires_grad = true;
    auto an = a.node_ptr(), bn = b.node_ptr();
    Tape<Real>::active().record([an, bn, out, period] {
      if (out->grad.empty()) return;
      if (an->requires_grad) {
        an->ensure_grad();
        for (std::size_t i = 0; i < out->grad.size(); ++i)
          an->grad[i] += out->grad[i] * bn->value[i % period];
      }
      if (bn->requires_grad) {
        bn->ensure_grad();
        for (std::size_t i = 0; i < out->grad.size(); ++i)
          bn->grad[i % period] += out->grad[i] * an->value[i];
      }
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> scale(const Tensor<Real>& a, Real factor) {
  auto out = new_node<Real>(a.shape());
  const auto& av = a.node()->value;
  for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] * factor;
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out, factor] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      for (std::size_t i = 0; i < out->grad.size(); ++i) an->grad[i] += out->grad[i] * factor;
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> relu(const Tensor<Real>& a) {
  auto out = new_node<Real>(a.shape());
  const auto& av = a.node()->value;
  for (std::size_t i = 0; i < av.size(); ++i) out->value[i] = av[i] > Real(0) ? av[i] : Real(0);
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      for (std::size_t i = 0; i < out->grad.size(); ++i)
        if (an->value[i] > Real(0)) an->grad[i] += out->grad[i];
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> sum(const Tensor<Real>& a) {
  auto out = new_node<Real>({1});
  Real total = 0;
  for (Real v : a.node()->value) total += v;
  out->value[0] = total;
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      const Real g = out->grad[0];
      for (auto& x : an->grad) x += g;
    });
  }
  return Tensor<Real>(out);
}

// ------------------------------------------------------------- structural

template <class Real>
Tensor<Real> matmul(const Tensor<Real>& a, const Tensor<Real>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0))
    shape_fail("matmul", a.shape(), b.shape(), "expected (m,k) x (k,n)");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  auto out = new_node<Real>({m, n});
  kernels::gemm_acc(a.node()->value.data(), b.node()->value.data(), out->value.data(), m, k,
                    n);
  if (tracks<Real>({&a, &b})) {
    out->requires_grad = true;
    auto an = a.node_ptr(), bn = b.node_ptr();
    Tape<Real>::active().record([an, bn, out, m, k, n] {
      if (out->grad.empty()) return;
      if (an->requires_grad) {
        // dA = dC * B^T
        an->ensure_grad();
        kernels::gemm_nt_acc(out->grad.data(), bn->value.data(), an->grad.data(), m, n, k);
      }
      if (bn->requires_grad) {
        // dB = A^T * dC
        bn->ensure_grad();
        kernels::gemm_tn_acc(an->value.data(), out->grad.data(), bn->grad.data(), m, k, n);
      }
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> transpose(const Tensor<Real>& a) {
  if (a.rank() != 2) throw ShapeError("transpose: expected rank 2, got " + shape_str(a.shape()));
  const std::size_t r = a.dim(0), c = a.dim(1);
  auto out = new_node<Real>({c, r});
  kernels::transpose_into(a.node()->value.data(), out->value.data(), r, c);
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out, r, c] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) an->grad[i * c + j] += out->grad[j * r + i];
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> reshape(const Tensor<Real>& a, Shape shape) {
  check_shape(shape);
  if (numel(shape) != a.size()) shape_fail("reshape", a.shape(), shape, "element counts differ");
  auto out = std::make_shared<TensorNode<Real>>();
  out->shape = std::move(shape);
  out->value = a.node()->value;
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      for (std::size_t i = 0; i < out->grad.size(); ++i) an->grad[i] += out->grad[i];
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> concat(const std::vector<Tensor<Real>>& parts, std::size_t axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Shape& first = parts.front().shape();
  if (axis >= first.size())
    throw ShapeError("concat: axis " + std::to_string(axis) + " out of range for " +
                     shape_str(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t i = 0; ok && i < s.size(); ++i)
      if (i != axis && s[i] != first[i]) ok = false;
    if (!ok) shape_fail("concat", first, s);
    out_shape[axis] += s[axis];
  }
  auto out = new_node<Real>(out_shape);
  const AxisView ov = axis_view(out_shape, axis);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    const std::size_t chunk = p.dim(axis) * ov.inner;
    const auto& pv = p.node()->value;
    for (std::size_t o = 0; o < ov.outer; ++o)
      std::copy_n(pv.begin() + o * chunk, chunk,
                  out->value.begin() + o * ov.extent * ov.inner + offset * ov.inner);
    offset += p.dim(axis);
  }
  bool any = false;
  for (const auto& p : parts) any = any || tracks<Real>({&p});
  if (any) {
    out->requires_grad = true;
    std::vector<std::shared_ptr<TensorNode<Real>>> nodes;
    for (const auto& p : parts) nodes.push_back(p.node_ptr());
    Tape<Real>::active().record([nodes, offsets, out, ov, axis] {
      if (out->grad.empty()) return;
      for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
        auto& pn = nodes[idx];
        if (!pn->requires_grad) continue;
        pn->ensure_grad();
        const std::size_t chunk = pn->shape[axis] * ov.inner;
        for (std::size_t o = 0; o < ov.outer; ++o) {
          const Real* src = out->grad.data() + o * ov.extent * ov.inner + offsets[idx] * ov.inner;
          Real* dst = pn->grad.data() + o * chunk;
          for (std::size_t i = 0; i < chunk; ++i) dst[i] += src[i];
        }
      }
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> slice(const Tensor<Real>& a, std::size_t axis, std::size_t begin,
                   std::size_t end) {
  if (axis >= a.rank() || begin >= end || end > a.dim(axis))
    throw ShapeError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") on axis " + std::to_string(axis) + " invalid for " +
                     shape_str(a.shape()));
  Shape out_shape = a.shape();
  out_shape[axis] = end - begin;
  auto out = new_node<Real>(out_shape);
  const AxisView av = axis_view(a.shape(), axis);
  const std::size_t chunk = (end - begin) * av.inner;
  const auto& src = a.node()->value;
  for (std::size_t o = 0; o < av.outer; ++o)
    std::copy_n(src.begin() + o * av.extent * av.inner + begin * av.inner, chunk,
                out->value.begin() + o * chunk);
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out, av, begin, chunk] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      for (std::size_t o = 0; o < av.outer; ++o) {
        Real* dst = an->grad.data() + o * av.extent * av.inner + begin * av.inner;
        const Real* g = out->grad.data() + o * chunk;
        for (std::size_t i = 0; i < chunk; ++i) dst[i] += g[i];
      }
    });
  }
  return Tensor<Real>(out);
}

// ---------------------------------------------------------- normalization

template <class Real>
Tensor<Real> softmax(const Tensor<Real>& a, std::size_t axis) {
  if (axis >= a.rank())
    throw ShapeError("softmax: axis " + std::to_string(axis) + " out of range for " +
                     shape_str(a.shape()));
  const AxisView v = axis_view(a.shape(), axis);
  auto out = new_node<Real>(a.shape());
  const auto& x = a.node()->value;
  auto& y = out->value;
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t in = 0; in < v.inner; ++in) {
      const std::size_t base = o * v.extent * v.inner + in;
      Real mx = -std::numeric_limits<Real>::infinity();
      for (std::size_t e = 0; e < v.extent; ++e) mx = std::max(mx, x[base + e * v.inner]);
      Real total = 0;
      for (std::size_t e = 0; e < v.extent; ++e) {
        const Real ex = std::exp(x[base + e * v.inner] - mx);
        y[base + e * v.inner] = ex;
        total += ex;
      }
      for (std::size_t e = 0; e < v.extent; ++e) y[base + e * v.inner] /= total;
    }
  }
  if (tracks<Real>({&a})) {
    out->requires_grad = true;
    auto an = a.node_ptr();
    Tape<Real>::active().record([an, out, v] {
      if (out->grad.empty()) return;
      an->ensure_grad();
      const auto& y = out->value;
      const auto& gy = out->grad;
      for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t in = 0; in < v.inner; ++in) {
          const std::size_t base = o * v.extent * v.inner + in;
          Real dot = 0;
          for (std::size_t e = 0; e < v.extent; ++e)
            dot += gy[base + e * v.inner] * y[base + e * v.inner];
          for (std::size_t e = 0; e < v.extent; ++e) {
            const std::size_t i = base + e * v.inner;
            an->grad[i] += y[i] * (gy[i] - dot);
          }
        }
      }
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> layer_norm(const Tensor<Real>& x, const Tensor<Real>& gamma,
                        const Tensor<Real>& beta, Real eps) {
  const std::size_t d = x.shape().back();
  if (gamma.shape() != Shape{d} || beta.shape() != Shape{d})
    shape_fail("layer_norm", x.shape(), gamma.shape(), "gamma/beta must be (last dim)");
  const std::size_t rows = x.size() / d;
  auto out = new_node<Real>(x.shape());
  std::vector<Real> xhat(x.size());
  std::vector<Real> inv_std(rows);
  const auto& xv = x.node()->value;
  const auto& g = gamma.node()->value;
  const auto& bta = beta.node()->value;
  for (std::size_t r = 0; r < rows; ++r) {
    const Real* row = xv.data() + r * d;
    Real mean = 0;
    for (std::size_t j = 0; j < d; ++j) mean += row[j];
    mean /= Real(d);
    Real var = 0;
    for (std::size_t j = 0; j < d; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= Real(d);
    const Real is = Real(1) / std::sqrt(var + eps);
    inv_std[r] = is;
    for (std::size_t j = 0; j < d; ++j) {
      const Real h = (row[j] - mean) * is;
      xhat[r * d + j] = h;
      out->value[r * d + j] = h * g[j] + bta[j];
    }
  }
  if (tracks<Real>({&x, &gamma, &beta})) {
    out->requires_grad = true;
    auto xn = x.node_ptr(), gn = gamma.node_ptr(), bn = beta.node_ptr();
    Tape<Real>::active().record(
        [xn, gn, bn, out, xhat = std::move(xhat), inv_std = std::move(inv_std), rows, d] {
          if (out->grad.empty()) return;
          const auto& gy = out->grad;
          if (gn->requires_grad) {
            gn->ensure_grad();
            for (std::size_t i = 0; i < gy.size(); ++i) gn->grad[i % d] += gy[i] * xhat[i];
          }
          if (bn->requires_grad) {
            bn->ensure_grad();
            for (std::size_t i = 0; i < gy.size(); ++i) bn->grad[i % d] += gy[i];
          }
          if (xn->requires_grad) {
            xn->ensure_grad();
            for (std::size_t r = 0; r < rows; ++r) {
              Real mean_g = 0, mean_gx = 0;
              for (std::size_t j = 0; j < d; ++j) {
                const Real gh = gy[r * d + j] * gn->value[j];
                mean_g += gh;
                mean_gx += gh * xhat[r * d + j];
              }
              mean_g /= Real(d);
              mean_gx /= Real(d);
              for (std::size_t j = 0; j < d; ++j) {
                const Real gh = gy[r * d + j] * gn->value[j];
                xn->grad[r * d + j] +=
                    inv_std[r] * (gh - mean_g - xhat[r * d + j] * mean_gx);
              }
            }
          }
        });
  }
  return Tensor<Real>(out);
}

// ------------------------------------------------------------ lookup/loss

template <class Real>
Tensor<Real> embedding(const Tensor<Real>& table, std::span<const int> ids) {
  if (table.rank() != 2) throw ShapeError("embedding: table must be rank 2");
  if (ids.empty()) throw ShapeError("embedding: empty id list");
  const std::size_t vocab = table.dim(0), d = table.dim(1);
  std::vector<int> idv(ids.begin(), ids.end());
  for (int id : idv)
    if (id < 0 || static_cast<std::size_t>(id) >= vocab)
      throw ShapeError("embedding: id " + std::to_string(id) + " outside table " +
                       shape_str(table.shape()));
  auto out = new_node<Real>({idv.size(), d});
  const auto& tv = table.node()->value;
  for (std::size_t i = 0; i < idv.size(); ++i)
    std::copy_n(tv.begin() + idv[i] * d, d, out->value.begin() + i * d);
  if (tracks<Real>({&table})) {
    out->requires_grad = true;
    auto tn = table.node_ptr();
    Tape<Real>::active().record([tn, out, idv = std::move(idv), d] {
      if (out->grad.empty()) return;
      tn->ensure_grad();
      for (std::size_t i = 0; i < idv.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) tn->grad[idv[i] * d + j] += out->grad[i * d + j];
    });
  }
  return Tensor<Real>(out);
}

template <class Real>
Tensor<Real> cross_entropy(const Tensor<Real>& logits, std::span<const int> targets,
                           int ignore_id, Reduction reduction) {
  if (logits.rank() != 2 || logits.dim(0) != targets.size())
    shape_fail("cross_entropy", logits.shape(), Shape{targets.size()},
               "expected (N,V) logits and N targets");
  const std::size_t n = logits.dim(0), vocab = logits.dim(1);
  std::vector<int> tv(targets.begin(), targets.end());
  const auto& x = logits.node()->value;
  std::vector<Real> probs(x.size());
  Real total = 0;
  std::size_t counted = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const Real* row = x.data() + r * vocab;
    Real mx = -std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < vocab; ++j) mx = std::max(mx, row[j]);
    Real z = 0;
    for (std::size_t j = 0; j < vocab; ++j) {
      const Real e = std::exp(row[j] - mx);
      probs[r * vocab + j] = e;
      z += e;
    }
    for (std::size_t j = 0; j < vocab; ++j) probs[r * vocab + j] /= z;
    if (tv[r] == ignore_id) continue;
    if (tv[r] < 0 || static_cast<std::size_t>(tv[r]) >= vocab)
      throw ShapeError("cross_entropy: target " + std::to_string(tv[r]) +
                       " outside vocabulary of " + std::to_string(vocab));
    total += std::log(z) + mx - row[tv[r]];
    ++counted;
  }
  const Real norm =
      reduction == Reduction::Mean ? (counted ? Real(1) / Real(counted) : Real(0)) : Real(1);
  auto out = new_node<Real>({1});
  out->value[0] = total * norm;
  if (tracks<Real>({&logits})) {
    out->requires_grad = true;
    auto ln = logits.node_ptr();
    Tape<Real>::active().record(
        [ln, out, probs = std::move(probs), tv = std::move(tv), norm, vocab, ignore_id] {
          if (out->grad.empty()) return;
          ln->ensure_grad();
          const Real g = out->grad[0] * norm;
          for (std::size_t r = 0; r < tv.size(); ++r) {
            if (tv[r] == ignore_id) continue;
            for (std::size_t j = 0; j < vocab; ++j)
              ln->grad[r * vocab + j] += g * probs[r * vocab + j];
            ln->grad[r * vocab + tv[r]] -= g;
          }
        });
  }
  return Tensor<Real>(out);
}

// ------------------------------------------------------- instantiations

#define UMT_INSTANTIATE(R)                                                          \
  template class Tensor<R>;                                                         \
  template class Tape<R>;                                                           \
  template Tensor<R> add(const Tensor<R>&, const Tensor<R>&);                       \
  template Tensor<R> mul(const Tensor<R>&, const Tensor<R>&);                       \
  template Tensor<R> scale(const Tensor<R>&, R);                                    \
  template Tensor<R> relu(const Tensor<R>&);                                        \
  template Tensor<R> sum(const Tensor<R>&);                                         \
  template Tensor<R> matmul(const Tensor<R>&, const Tensor<R>&);                    \
  template Tensor<R> transpose(const Tensor<R>&);                                   \
  template Tensor<R> reshape(const Tensor<R>&, Shape);                              \
  template Tensor<R> concat(const std::vector<Tensor<R>>&, std::size_t);            \
  template Tensor<R> slice(const Tensor<R>&, std::size_t, std::size_t, std::size_t); \
  template Tensor<R> softmax(const Tensor<R>&, std::size_t);                        \
  template Tensor<R> layer_norm(const Tensor<R>&, const Tensor<R>&, const Tensor<R>&, R); \
  template Tensor<R> embedding(const Tensor<R>&, std::span<const int>);             \
  template Tensor<R> cross_entropy(const Tensor<R>&, std::span<const int>, int, Reduction);

UMT_INSTANTIATE(float)
UMT_INSTANTIATE(double)

}  // namespace umt
