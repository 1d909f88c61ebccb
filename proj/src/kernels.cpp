#include "erelifm/kernels.hpp"

#include <cassert>

namespace erelifm::kernels {

namespace {
constexpr size_t kParallelThreshold = 4096;  // total multiply-adds
}

void matmul_nt_serial(const Matrix& x, const Matrix& w, Matrix& out) {
    assert(x.cols == w.cols);
    out = Matrix(x.rows, w.rows);
    for (size_t b = 0; b < x.rows; ++b) {
        const double* xr = x.row(b);
        for (size_t m = 0; m < w.rows; ++m) {
            const double* wr = w.row(m);
            double acc = 0.0;
            for (size_t k = 0; k < x.cols; ++k) acc += xr[k] * wr[k];
            out(b, m) = acc;
        }
    }
}

void matmul_nt_omp(const Matrix& x, const Matrix& w, Matrix& out) {
    assert(x.cols == w.cols);
    out = Matrix(x.rows, w.rows);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < static_cast<long>(x.rows); ++b) {
        const double* xr = x.row(static_cast<size_t>(b));
        for (size_t m = 0; m < w.rows; ++m) {
            const double* wr = w.row(m);
            double acc = 0.0;
            for (size_t k = 0; k < x.cols; ++k) acc += xr[k] * wr[k];
            out(static_cast<size_t>(b), m) = acc;
        }
    }
}

void matmul_nn_serial(const Matrix& a, const Matrix& w, Matrix& out) {
    assert(a.cols == w.rows);
    out = Matrix(a.rows, w.cols);
    for (size_t b = 0; b < a.rows; ++b) {
        const double* ar = a.row(b);
        double* or_ = out.row(b);
        for (size_t m = 0; m < a.cols; ++m) {
            const double av = ar[m];
            const double* wr = w.row(m);
            for (size_t k = 0; k < w.cols; ++k) or_[k] += av * wr[k];
        }
    }
}

void matmul_nn_omp(const Matrix& a, const Matrix& w, Matrix& out) {
    assert(a.cols == w.rows);
    out = Matrix(a.rows, w.cols);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < static_cast<long>(a.rows); ++b) {
        const double* ar = a.row(static_cast<size_t>(b));
        double* or_ = out.row(static_cast<size_t>(b));
        for (size_t m = 0; m < a.cols; ++m) {
            const double av = ar[m];
            const double* wr = w.row(m);
            for (size_t k = 0; k < w.cols; ++k) or_[k] += av * wr[k];
        }
    }
}

void matmul_tn_serial(const Matrix& a, const Matrix& x, Matrix& out) {
    assert(a.rows == x.rows);
    out = Matrix(a.cols, x.cols);
    for (size_t m = 0; m < a.cols; ++m) {
        double* or_ = out.row(m);
        for (size_t b = 0; b < a.rows; ++b) {
            const double av = a(b, m);
            const double* xr = x.row(b);
            for (size_t k = 0; k < x.cols; ++k) or_[k] += av * xr[k];
        }
    }
}

void matmul_tn_omp(const Matrix& a, const Matrix& x, Matrix& out) {
    assert(a.rows == x.rows);
    out = Matrix(a.cols, x.cols);
#pragma omp parallel for schedule(static)
    for (long m = 0; m < static_cast<long>(a.cols); ++m) {
        double* or_ = out.row(static_cast<size_t>(m));
        for (size_t b = 0; b < a.rows; ++b) {
            const double av = a(b, static_cast<size_t>(m));
            const double* xr = x.row(b);
            for (size_t k = 0; k < x.cols; ++k) or_[k] += av * xr[k];
        }
    }
}

void matmul_nt(const Matrix& x, const Matrix& w, Matrix& out) {
#ifdef _OPENMP
    if (x.rows * w.rows * x.cols >= kParallelThreshold) {
        matmul_nt_omp(x, w, out);
        return;
    }
#endif
    matmul_nt_serial(x, w, out);
}

void matmul_nn(const Matrix& a, const Matrix& w, Matrix& out) {
#ifdef _OPENMP
    if (a.rows * a.cols * w.cols >= kParallelThreshold) {
        matmul_nn_omp(a, w, out);
        return;
    }
#endif
    matmul_nn_serial(a, w, out);
}

void matmul_tn(const Matrix& a, const Matrix& x, Matrix& out) {
#ifdef _OPENMP
    if (a.rows * a.cols * x.cols >= kParallelThreshold) {
        matmul_tn_omp(a, x, out);
        return;
    }
#endif
    matmul_tn_serial(a, x, out);
}

}  // namespace erelifm::kernels
