#include "lowrr/kernels.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lowrr::kernels {

namespace {

// Work sizes below these thresholds are not worth a parallel region.
constexpr std::int64_t kGemmCutoff = 16384;
constexpr std::int64_t kReduceCutoff = 16384;

// Reductions are summed in fixed-size blocks and folded in block order, so
// the result is independent of the number of threads.
constexpr std::int64_t kReduceBlock = 4096;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double blocked_sum(const double* x, const double* y, std::int64_t n, Exec exec) {
  if (exec == Exec::serial || n < kReduceCutoff) {
    double acc = 0.0;
    if (y) {
      for (std::int64_t i = 0; i < n; ++i) acc += x[i] * y[i];
    } else {
      for (std::int64_t i = 0; i < n; ++i) acc += x[i] * x[i];
    }
    return acc;
  }
  const std::int64_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kReduceBlock;
    const std::int64_t hi = std::min(n, lo + kReduceBlock);
    double acc = 0.0;
    if (y) {
      for (std::int64_t i = lo; i < hi; ++i) acc += x[i] * y[i];
    } else {
      for (std::int64_t i = lo; i < hi; ++i) acc += x[i] * x[i];
    }
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

Mat gemm_nn(const Mat& a, const Mat& b, Exec exec) {
  require(a.cols == b.rows, "gemm_nn: inner dimensions do not match");
  Mat c(a.rows, b.cols);
  const int m = a.rows, k = a.cols, n = b.cols;
  const std::int64_t work = static_cast<std::int64_t>(m) * k * n;
  if (exec == Exec::serial) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
        c(i, j) = acc;
      }
    return c;
  }
#pragma omp parallel for schedule(static) if (work >= kGemmCutoff)
  for (int i = 0; i < m; ++i) {
    double* ci = &c.data[static_cast<std::size_t>(i) * n];
    for (int l = 0; l < k; ++l) {
      const double ail = a(i, l);
      const double* bl = &b.data[static_cast<std::size_t>(l) * n];
      for (int j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

Mat gemm_tn(const Mat& a, const Mat& b, Exec exec) {
  require(a.rows == b.rows, "gemm_tn: inner dimensions do not match");
  Mat c(a.cols, b.cols);
  const int m = a.rows, k = a.cols, n = b.cols;
  const std::int64_t work = static_cast<std::int64_t>(m) * k * n;
  if (exec == Exec::serial) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < m; ++l) acc += a(l, i) * b(l, j);
        c(i, j) = acc;
      }
    return c;
  }
#pragma omp parallel for schedule(static) if (work >= kGemmCutoff)
  for (int i = 0; i < k; ++i) {
    double* ci = &c.data[static_cast<std::size_t>(i) * n];
    for (int l = 0; l < m; ++l) {
      const double ali = a(l, i);
      const double* bl = &b.data[static_cast<std::size_t>(l) * n];
      for (int j = 0; j < n; ++j) ci[j] += ali * bl[j];
    }
  }
  return c;
}

Mat gemm_nt(const Mat& a, const Mat& b, Exec exec) {
  require(a.cols == b.cols, "gemm_nt: inner dimensions do not match");
  Mat c(a.rows, b.rows);
  const int m = a.rows, k = a.cols, n = b.rows;
  const std::int64_t work = static_cast<std::int64_t>(m) * k * n;
  if (exec == Exec::serial) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < k; ++l) acc += a(i, l) * b(j, l);
        c(i, j) = acc;
      }
    return c;
  }
#pragma omp parallel for schedule(static) if (work >= kGemmCutoff)
  for (int i = 0; i < m; ++i) {
    const double* ai = &a.data[static_cast<std::size_t>(i) * k];
    for (int j = 0; j < n; ++j) {
      const double* bj = &b.data[static_cast<std::size_t>(j) * k];
      double acc = 0.0;
      for (int l = 0; l < k; ++l) acc += ai[l] * bj[l];
      c(i, j) = acc;
    }
  }
  return c;
}

double frob_norm_sq(const Mat& a, Exec exec) {
  return blocked_sum(a.data.data(), nullptr,
                     static_cast<std::int64_t>(a.data.size()), exec);
}

double frob_dot(const Mat& a, const Mat& b, Exec exec) {
  require(a.rows == b.rows && a.cols == b.cols, "frob_dot: shape mismatch");
  return blocked_sum(a.data.data(), b.data.data(),
                     static_cast<std::int64_t>(a.data.size()), exec);
}

}  // namespace lowrr::kernels
