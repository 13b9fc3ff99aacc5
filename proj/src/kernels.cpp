#include "rendnet/kernels.hpp"

#include <cstring>

namespace rendnet::kernels {

namespace serial {

void matmul(const double* A, const double* B, double* C, int n, int k, int m) {
    for (int i = 0; i < n; ++i) {
        double* ci = C + static_cast<size_t>(i) * m;
        std::memset(ci, 0, sizeof(double) * m);
        const double* ai = A + static_cast<size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            double a = ai[p];
            if (a == 0.0) continue;
            const double* bp = B + static_cast<size_t>(p) * m;
            for (int j = 0; j < m; ++j) ci[j] += a * bp[j];
        }
    }
}

void matmul_at_b(const double* A, const double* B, double* C, int n, int k, int m) {
    // C[k x m]; row r of C accumulates A[i, r] * B[i, :] over i, in i order.
    for (int r = 0; r < k; ++r) {
        double* cr = C + static_cast<size_t>(r) * m;
        std::memset(cr, 0, sizeof(double) * m);
        for (int i = 0; i < n; ++i) {
            double a = A[static_cast<size_t>(i) * k + r];
            if (a == 0.0) continue;
            const double* bi = B + static_cast<size_t>(i) * m;
            for (int j = 0; j < m; ++j) cr[j] += a * bi[j];
        }
    }
}

void matmul_a_bt(const double* A, const double* B, double* C, int n, int k, int m) {
    for (int i = 0; i < n; ++i) {
        const double* ai = A + static_cast<size_t>(i) * m;
        double* ci = C + static_cast<size_t>(i) * k;
        for (int r = 0; r < k; ++r) {
            const double* br = B + static_cast<size_t>(r) * m;
            double acc = 0.0;
            for (int j = 0; j < m; ++j) acc += ai[j] * br[j];
            ci[r] = acc;
        }
    }
}

void sparse_apply(const int32_t* offsets, const int32_t* idx, const double* w, int rows,
                  const double* X, int channels, double* Y) {
    for (int r = 0; r < rows; ++r) {
        double* yr = Y + static_cast<size_t>(r) * channels;
        std::memset(yr, 0, sizeof(double) * channels);
        for (int32_t j = offsets[r]; j < offsets[r + 1]; ++j) {
            const double* xs = X + static_cast<size_t>(idx[j]) * channels;
            double wj = w[j];
            for (int c = 0; c < channels; ++c) yr[c] += wj * xs[c];
        }
    }
}

void rowwise_matmul(const double* A, const double* B, double* out, int n, int p, int q) {
    for (int e = 0; e < n; ++e) {
        const double* ae = A + static_cast<size_t>(e) * p;
        const double* be = B + static_cast<size_t>(e) * p * q;
        double* oe = out + static_cast<size_t>(e) * q;
        std::memset(oe, 0, sizeof(double) * q);
        for (int i = 0; i < p; ++i) {
            double a = ae[i];
            const double* bi = be + static_cast<size_t>(i) * q;
            for (int j = 0; j < q; ++j) oe[j] += a * bi[j];
        }
    }
}

void rowwise_matmul_grad_a(const double* dOut, const double* B, double* dA, int n, int p, int q) {
    for (int e = 0; e < n; ++e) {
        const double* de = dOut + static_cast<size_t>(e) * q;
        const double* be = B + static_cast<size_t>(e) * p * q;
        double* ge = dA + static_cast<size_t>(e) * p;
        for (int i = 0; i < p; ++i) {
            const double* bi = be + static_cast<size_t>(i) * q;
            double acc = 0.0;
            for (int j = 0; j < q; ++j) acc += de[j] * bi[j];
            ge[i] = acc;
        }
    }
}

void rowwise_matmul_grad_b(const double* dOut, const double* A, double* dB, int n, int p, int q) {
    for (int e = 0; e < n; ++e) {
        const double* de = dOut + static_cast<size_t>(e) * q;
        const double* ae = A + static_cast<size_t>(e) * p;
        double* ge = dB + static_cast<size_t>(e) * p * q;
        for (int i = 0; i < p; ++i) {
            double a = ae[i];
            double* gi = ge + static_cast<size_t>(i) * q;
            for (int j = 0; j < q; ++j) gi[j] = a * de[j];
        }
    }
}

} // namespace serial

// Row-parallel versions. Each output row is produced by exactly one thread
// with the same per-row arithmetic order as the serial kernels.

void matmul(const double* A, const double* B, double* C, int n, int k, int m) {
#pragma omp parallel for schedule(static) if (n > 8 && static_cast<long>(n) * k * m > 16384)
    for (int i = 0; i < n; ++i) serial::matmul(A + static_cast<size_t>(i) * k, B,
                                               C + static_cast<size_t>(i) * m, 1, k, m);
}

void matmul_at_b(const double* A, const double* B, double* C, int n, int k, int m) {
#pragma omp parallel for schedule(static) if (k > 8 && static_cast<long>(n) * k * m > 16384)
    for (int r = 0; r < k; ++r) {
        double* cr = C + static_cast<size_t>(r) * m;
        std::memset(cr, 0, sizeof(double) * m);
        for (int i = 0; i < n; ++i) {
            double a = A[static_cast<size_t>(i) * k + r];
            if (a == 0.0) continue;
            const double* bi = B + static_cast<size_t>(i) * m;
            for (int j = 0; j < m; ++j) cr[j] += a * bi[j];
        }
    }
}

void matmul_a_bt(const double* A, const double* B, double* C, int n, int k, int m) {
#pragma omp parallel for schedule(static) if (n > 8 && static_cast<long>(n) * k * m > 16384)
    for (int i = 0; i < n; ++i) serial::matmul_a_bt(A + static_cast<size_t>(i) * m, B,
                                                    C + static_cast<size_t>(i) * k, 1, k, m);
}

void sparse_apply(const int32_t* offsets, const int32_t* idx, const double* w, int rows,
                  const double* X, int channels, double* Y) {
#pragma omp parallel for schedule(static) if (rows > 256)
    for (int r = 0; r < rows; ++r) {
        double* yr = Y + static_cast<size_t>(r) * channels;
        std::memset(yr, 0, sizeof(double) * channels);
        for (int32_t j = offsets[r]; j < offsets[r + 1]; ++j) {
            const double* xs = X + static_cast<size_t>(idx[j]) * channels;
            double wj = w[j];
            for (int c = 0; c < channels; ++c) yr[c] += wj * xs[c];
        }
    }
}

void rowwise_matmul(const double* A, const double* B, double* out, int n, int p, int q) {
#pragma omp parallel for schedule(static) if (n > 8 && static_cast<long>(n) * p * q > 16384)
    for (int e = 0; e < n; ++e)
        serial::rowwise_matmul(A + static_cast<size_t>(e) * p, B + static_cast<size_t>(e) * p * q,
                               out + static_cast<size_t>(e) * q, 1, p, q);
}

void rowwise_matmul_grad_a(const double* dOut, const double* B, double* dA, int n, int p, int q) {
#pragma omp parallel for schedule(static) if (n > 8 && static_cast<long>(n) * p * q > 16384)
    for (int e = 0; e < n; ++e)
        serial::rowwise_matmul_grad_a(dOut + static_cast<size_t>(e) * q,
                                      B + static_cast<size_t>(e) * p * q,
                                      dA + static_cast<size_t>(e) * p, 1, p, q);
}

void rowwise_matmul_grad_b(const double* dOut, const double* A, double* dB, int n, int p, int q) {
#pragma omp parallel for schedule(static) if (n > 8 && static_cast<long>(n) * p * q > 16384)
    for (int e = 0; e < n; ++e)
        serial::rowwise_matmul_grad_b(dOut + static_cast<size_t>(e) * q,
                                      A + static_cast<size_t>(e) * p,
                                      dB + static_cast<size_t>(e) * p * q, 1, p, q);
}

} // namespace rendnet::kernels
