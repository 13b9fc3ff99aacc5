#pragma once

#include <cstdint>

// Dense and sparse inner loops shared by the autodiff engine and the
// rasterization plan. Every kernel has a serial reference implementation in
// kernels::serial; the OpenMP variants parallelize over output rows only, so
// results are bit-identical to the reference.
namespace rendnet::kernels {

namespace serial {
// C[n x m] = A[n x k] * B[k x m]
void matmul(const double* A, const double* B, double* C, int n, int k, int m);
// C[k x m] = A^T * B for A[n x k], B[n x m]
void matmul_at_b(const double* A, const double* B, double* C, int n, int k, int m);
// C[n x k] = A * B^T for A[n x m], B[k x m]
void matmul_a_bt(const double* A, const double* B, double* C, int n, int k, int m);
// Y[r] = sum_j w[j] * X[idx[j]] over j in [offsets[r], offsets[r+1])
void sparse_apply(const int32_t* offsets, const int32_t* idx, const double* w, int rows,
                  const double* X, int channels, double* Y);
// out[e, q] = sum_p A[e, p] * B[e, p*q + q'] — per-row vector-matrix product
void rowwise_matmul(const double* A, const double* B, double* out, int n, int p, int q);
void rowwise_matmul_grad_a(const double* dOut, const double* B, double* dA, int n, int p, int q);
void rowwise_matmul_grad_b(const double* dOut, const double* A, double* dB, int n, int p, int q);
} // namespace serial

void matmul(const double* A, const double* B, double* C, int n, int k, int m);
void matmul_at_b(const double* A, const double* B, double* C, int n, int k, int m);
void matmul_a_bt(const double* A, const double* B, double* C, int n, int k, int m);
void sparse_apply(const int32_t* offsets, const int32_t* idx, const double* w, int rows,
                  const double* X, int channels, double* Y);
void rowwise_matmul(const double* A, const double* B, double* out, int n, int p, int q);
void rowwise_matmul_grad_a(const double* dOut, const double* B, double* dA, int n, int p, int q);
void rowwise_matmul_grad_b(const double* dOut, const double* A, double* dB, int n, int p, int q);

} // namespace rendnet::kernels
