#include "guided/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>

#ifdef GUIDED_HAVE_OPENMP
#include <omp.h>
#endif

namespace guided::kernels {

namespace serial {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + beta * y[i];
}

void gemv_colmajor(const double* a, std::size_t rows, std::size_t cols, std::span<const double> x,
                   std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    const double* col = a + j * rows;
    for (std::size_t i = 0; i < rows; ++i) y[i] += col[i] * xj;
  }
}

void gemv_t_colmajor(const double* a, std::size_t rows, std::size_t cols,
                     std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += col[i] * x[i];
    y[j] = s;
  }
}

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t p,
            std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = c + i * n;
    std::fill(ci, ci + n, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
      const double aik = a[i * p + k];
      const double* bk = b + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void block_mean(const double* img, std::size_t w, std::size_t r, double* low) {
  const std::size_t m = w / r;
  const double scale = 1.0 / static_cast<double>(r * r);
  for (std::size_t bi = 0; bi < m; ++bi) {
    for (std::size_t bj = 0; bj < m; ++bj) {
      double s = 0.0;
      for (std::size_t di = 0; di < r; ++di) {
        const double* row = img + (bi * r + di) * w + bj * r;
        for (std::size_t dj = 0; dj < r; ++dj) s += row[dj];
      }
      low[bi * m + bj] = s * scale;
    }
  }
}

void block_replicate(const double* low, std::size_t m, std::size_t r, double* img) {
  const std::size_t w = m * r;
  for (std::size_t i = 0; i < w; ++i) {
    const double* lrow = low + (i / r) * m;
    double* row = img + i * w;
    for (std::size_t j = 0; j < w; ++j) row[j] = lrow[j / r];
  }
}

}  // namespace serial

namespace parallel {

#ifdef GUIDED_HAVE_OPENMP

namespace {
bool worth_it(std::size_t work) { return work >= kParallelThreshold; }
}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const auto n = static_cast<std::int64_t>(a.size());
  double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static) if (worth_it(a.size()))
  for (std::int64_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (worth_it(x.size()))
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  assert(x.size() == y.size());
  const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (worth_it(x.size()))
  for (std::int64_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void gemv_colmajor(const double* a, std::size_t rows, std::size_t cols, std::span<const double> x,
                   std::span<double> y) {
  // Each thread owns a contiguous row range and sweeps all columns over it.
  const auto nrows = static_cast<std::int64_t>(rows);
  const std::int64_t block = 256;
  const std::int64_t nblocks = (nrows + block - 1) / block;
#pragma omp parallel for schedule(static) if (worth_it(rows * cols))
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(nrows, lo + block);
    for (std::int64_t i = lo; i < hi; ++i) y[i] = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double xj = x[j];
      const double* col = a + j * rows;
      for (std::int64_t i = lo; i < hi; ++i) y[i] += col[i] * xj;
    }
  }
}

void gemv_t_colmajor(const double* a, std::size_t rows, std::size_t cols,
                     std::span<const double> x, std::span<double> y) {
  const auto ncols = static_cast<std::int64_t>(cols);
#pragma omp parallel for schedule(static) if (worth_it(rows * cols))
  for (std::int64_t j = 0; j < ncols; ++j) {
    const double* col = a + j * rows;
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += col[i] * x[i];
    y[j] = s;
  }
}

void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t p,
            std::size_t n) {
  const auto mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (worth_it(m * p * n))
  for (std::int64_t i = 0; i < mm; ++i) {
    double* ci = c + i * n;
    std::fill(ci, ci + n, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
      const double aik = a[i * p + k];
      const double* bk = b + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void block_mean(const double* img, std::size_t w, std::size_t r, double* low) {
  const std::size_t m = w / r;
  const double scale = 1.0 / static_cast<double>(r * r);
  const auto mm = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (worth_it(w * w))
  for (std::int64_t bi = 0; bi < mm; ++bi) {
    for (std::size_t bj = 0; bj < m; ++bj) {
      double s = 0.0;
      for (std::size_t di = 0; di < r; ++di) {
        const double* row = img + (bi * r + di) * w + bj * r;
        for (std::size_t dj = 0; dj < r; ++dj) s += row[dj];
      }
      low[bi * m + bj] = s * scale;
    }
  }
}

void block_replicate(const double* low, std::size_t m, std::size_t r, double* img) {
  const std::size_t w = m * r;
  const auto ww = static_cast<std::int64_t>(w);
#pragma omp parallel for schedule(static) if (worth_it(w * w))
  for (std::int64_t i = 0; i < ww; ++i) {
    const double* lrow = low + (i / r) * m;
    double* row = img + i * w;
    for (std::size_t j = 0; j < w; ++j) row[j] = lrow[j / r];
  }
}

int max_threads() { return omp_get_max_threads(); }

#else

double dot(std::span<const double> a, std::span<const double> b) { return serial::dot(a, b); }
void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  serial::axpy(alpha, x, y);
}
void xpby(std::span<const double> x, double beta, std::span<double> y) {
  serial::xpby(x, beta, y);
}
void gemv_colmajor(const double* a, std::size_t rows, std::size_t cols, std::span<const double> x,
                   std::span<double> y) {
  serial::gemv_colmajor(a, rows, cols, x, y);
}
void gemv_t_colmajor(const double* a, std::size_t rows, std::size_t cols,
                     std::span<const double> x, std::span<double> y) {
  serial::gemv_t_colmajor(a, rows, cols, x, y);
}
void matmul(const double* a, const double* b, double* c, std::size_t m, std::size_t p,
            std::size_t n) {
  serial::matmul(a, b, c, m, p, n);
}
void block_mean(const double* img, std::size_t w, std::size_t r, double* low) {
  serial::block_mean(img, w, r, low);
}
void block_replicate(const double* low, std::size_t m, std::size_t r, double* img) {
  serial::block_replicate(low, m, r, img);
}
int max_threads() { return 1; }

#endif

}  // namespace parallel

}  // namespace guided::kernels
