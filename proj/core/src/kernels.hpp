#pragma once

// Row-major dense kernels on raw buffers, backed by Eigen. Results are
// deterministic for a given shape; a single-row product may differ from the
// matching row of a multi-row product in the last bits.

#include <cstddef>

#include <Eigen/Core>

namespace umt::kernels {

template <class Real>
using RowMajor = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Real>
using ConstView = Eigen::Map<const RowMajor<Real>>;

template <class Real>
using View = Eigen::Map<RowMajor<Real>>;

// C(m,n) += A(m,k) * B(k,n)
template <class Real>
void gemm_acc(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k,
              std::size_t n) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k),
             N = static_cast<Eigen::Index>(n);
  View<Real>(c, M, N).noalias() += ConstView<Real>(a, M, K) * ConstView<Real>(b, K, N);
}

// C(m,k) += A(m,n) * B(k,n)^T
template <class Real>
void gemm_nt_acc(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t n,
                 std::size_t k) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k),
             N = static_cast<Eigen::Index>(n);
  View<Real>(c, M, K).noalias() += ConstView<Real>(a, M, N) * ConstView<Real>(b, K, N).transpose();
}

// C(k,n) += A(m,k)^T * B(m,n)
template <class Real>
void gemm_tn_acc(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k,
                 std::size_t n) {
  const auto M = static_cast<Eigen::Index>(m), K = static_cast<Eigen::Index>(k),
             N = static_cast<Eigen::Index>(n);
  View<Real>(c, K, N).noalias() += ConstView<Real>(a, M, K).transpose() * ConstView<Real>(b, M, N);
}

// out(cols,rows) = in(rows,cols)^T
template <class Real>
void transpose_into(const Real* in, Real* out, std::size_t rows, std::size_t cols) {
  const auto R = static_cast<Eigen::Index>(rows), C = static_cast<Eigen::Index>(cols);
  View<Real>(out, C, R) = ConstView<Real>(in, R, C).transpose();
}

}  // namespace umt::kernels
