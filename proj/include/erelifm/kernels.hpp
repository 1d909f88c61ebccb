#pragma once

#include "erelifm/tensor.hpp"

namespace erelifm::kernels {

// Matrix kernels behind the MLP. Each has a serial reference and an
// OpenMP version parallelized over output rows, so the two are
// bit-identical (every output element is accumulated in the same order).

// C[B x M] = X[B x K] * W[M x K]^T
void matmul_nt_serial(const Matrix& x, const Matrix& w, Matrix& out);
void matmul_nt_omp(const Matrix& x, const Matrix& w, Matrix& out);

// C[B x K] = A[B x M] * W[M x K]
void matmul_nn_serial(const Matrix& a, const Matrix& w, Matrix& out);
void matmul_nn_omp(const Matrix& a, const Matrix& w, Matrix& out);

// C[M x K] = A[B x M]^T * X[B x K]
void matmul_tn_serial(const Matrix& a, const Matrix& x, Matrix& out);
void matmul_tn_omp(const Matrix& a, const Matrix& x, Matrix& out);

// Dispatchers: OpenMP build uses the parallel kernel above a size
// threshold, otherwise serial.
void matmul_nt(const Matrix& x, const Matrix& w, Matrix& out);
void matmul_nn(const Matrix& a, const Matrix& w, Matrix& out);
void matmul_tn(const Matrix& a, const Matrix& x, Matrix& out);

}  // namespace erelifm::kernels
