#pragma once

// Dense inner loops behind every projector action.
//
// `serial` is the reference implementation and is what the tests compare
// against. `parallel` splits the same loops with OpenMP; when the library is
// built without OpenMP it forwards to `serial`. The unqualified functions in
// `guided::kernels` dispatch to `parallel`.
//
// Matrices are dense and row-major unless the name says otherwise. Column-major
// variants exist for Eigen storage (gemv_colmajor / gemv_t_colmajor).

#include <cstddef>
#include <span>

namespace guided::kernels {

/// Below this many scalar operations a kernel stays on the calling thread.
inline constexpr std::size_t kParallelThreshold = 1 << 14;

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
// y = x + beta * y
void xpby(std::span<const double> x, double beta, std::span<double> y);

// y = A x, A is rows x cols column-major.
void gemv_colmajor(const double* a, std::size_t rows, std::size_t cols, std::span<const double> x,
                   std::span<double> y);
// y = A^T x, A is rows x cols column-major.
void gemv_t_colmajor(const double* a, std::size_t rows, std::size_t cols,
                     std::span<const double> x, std::span<double> y);

// C (m x n) = A (m x p) * B (p x n), all row-major.
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t p,
            std::size_t n);

// Mean over each r x r block of a w x w row-major image; low is (w/r) x (w/r).
void block_mean(const double* img, std::size_t w, std::size_t r, double* low);
// Copy each low-res pixel into an r x r block; img is (m*r) x (m*r).
void block_replicate(const double* low, std::size_t m, std::size_t r, double* img);

}  // namespace serial

namespace parallel {

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double beta, std::span<double> y);
void gemv_colmajor(const double* a, std::size_t rows, std::size_t cols, std::span<const double> x,
                   std::span<double> y);
void gemv_t_colmajor(const double* a, std::size_t rows, std::size_t cols,
                     std::span<const double> x, std::span<double> y);
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t p,
            std::size_t n);
void block_mean(const double* img, std::size_t w, std::size_t r, double* low);
void block_replicate(const double* low, std::size_t m, std::size_t r, double* img);

/// Threads OpenMP would use for a parallel region (1 without OpenMP).
int max_threads();

}  // namespace parallel

using parallel::axpy;
using parallel::block_mean;
using parallel::block_replicate;
using parallel::dot;
using parallel::gemv_colmajor;
using parallel::gemv_t_colmajor;
using parallel::matmul;
using parallel::xpby;

}  // namespace guided::kernels
