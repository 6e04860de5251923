#include "lowrr/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace lowrr {

using kernels::Exec;

namespace detail {

std::vector<std::vector<std::pair<int, int>>> round_robin_schedule(int n) {
  std::vector<std::vector<std::pair<int, int>>> rounds;
  if (n < 2) return rounds;
  const int slots = (n % 2 == 0) ? n : n + 1;  // odd n gets a bye slot
  std::vector<int> ring(slots - 1);
  std::iota(ring.begin(), ring.end(), 1);
  rounds.reserve(slots - 1);
  for (int round = 0; round < slots - 1; ++round) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(slots / 2);
    auto add = [&](int a, int b) {
      if (a >= n || b >= n) return;  // bye
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    };
    add(0, ring[round % ring.size()]);
    for (int k = 1; k < slots / 2; ++k) {
      const int i = ring[(round + k) % ring.size()];
      const int j = ring[(round + ring.size() - k) % ring.size()];
      add(i, j);
    }
    rounds.push_back(std::move(pairs));
  }
  return rounds;
}

}  // namespace detail

namespace {

// Skip a rotation when the normalized off-diagonal is already at roundoff.
constexpr double kRotTol = 2.0e-14;
constexpr int kMaxSweeps = 60;

// Orthogonalize columns (i, j) of w, accumulating the rotation in v.
// Returns true when a rotation was applied. Touches only those two columns,
// so disjoint pairs can run concurrently.
bool rotate_pair(Mat& w, Mat& v, int i, int j) {
  const int m = w.rows;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  for (int r = 0; r < m; ++r) {
    const double wi = w(r, i), wj = w(r, j);
    alpha += wi * wi;
    beta += wj * wj;
    gamma += wi * wj;
  }
  const double scale = std::sqrt(alpha) * std::sqrt(beta);
  if (scale == 0.0 || std::abs(gamma) <= kRotTol * scale) return false;

  const double zeta = (beta - alpha) / (2.0 * gamma);
  const double t =
      std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  const double cs = 1.0 / std::sqrt(1.0 + t * t);
  const double sn = cs * t;

  for (int r = 0; r < m; ++r) {
    const double wi = w(r, i), wj = w(r, j);
    w(r, i) = cs * wi - sn * wj;
    w(r, j) = sn * wi + cs * wj;
  }
  const int nv = v.rows;
  for (int r = 0; r < nv; ++r) {
    const double vi = v(r, i), vj = v(r, j);
    v(r, i) = cs * vi - sn * vj;
    v(r, j) = sn * vi + cs * vj;
  }
  return true;
}

// Sweeps of the fixed round-robin ordering until no pair needs rotating.
// The parallel path executes each round's disjoint pairs concurrently; the
// rotation sequence is the same as the serial path, so the two agree.
void onesided_jacobi(Mat& w, Mat& v, Exec exec) {
  const auto schedule = detail::round_robin_schedule(w.cols);
  if (schedule.empty()) return;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    std::int64_t rotations = 0;
    for (const auto& round : schedule) {
      const std::int64_t npairs = static_cast<std::int64_t>(round.size());
      if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : rotations) \
    if (npairs * w.rows >= 2048)
        for (std::int64_t k = 0; k < npairs; ++k)
          rotations += rotate_pair(w, v, round[k].first, round[k].second) ? 1 : 0;
      } else {
        for (const auto& [i, j] : round)
          rotations += rotate_pair(w, v, i, j) ? 1 : 0;
      }
    }
    if (rotations == 0) return;
  }
}

}  // namespace

double default_rank_tol(const Mat& m) {
  return 1e-10 * static_cast<double>(std::max(m.rows, m.cols));
}

ThinSvd thin_svd(const Mat& m, double rel_tol, Exec exec) {
  if (m.rows <= 0 || m.cols <= 0)
    throw std::invalid_argument("thin_svd: matrix has empty dimensions");
  if (!all_finite(m))
    throw std::invalid_argument("thin_svd: non-finite entries");
  if (rel_tol < 0.0) throw std::invalid_argument("thin_svd: negative tolerance");

  const bool transposed = m.rows < m.cols;
  Mat w = transposed ? transpose(m) : m;
  Mat v = Mat::identity(w.cols);
  onesided_jacobi(w, v, exec);

  const int n = w.cols;
  std::vector<double> norms(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int r = 0; r < w.rows; ++r) acc += w(r, j) * w(r, j);
    norms[j] = std::sqrt(acc);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });

  const double s1 = norms[order[0]];
  int k = 0;
  while (k < n && norms[order[k]] > rel_tol * s1 && norms[order[k]] > 0.0) ++k;

  ThinSvd out;
  out.U = Mat(w.rows, k);
  out.V = Mat(n, k);
  out.s.resize(k);
  for (int c = 0; c < k; ++c) {
    const int j = order[c];
    const double sj = norms[j];
    out.s[c] = sj;
    for (int r = 0; r < w.rows; ++r) out.U(r, c) = w(r, j) / sj;
    for (int r = 0; r < n; ++r) out.V(r, c) = v(r, j);
  }
  if (transposed) std::swap(out.U, out.V);
  return out;
}

ThinSvd thin_svd(const Mat& m) { return thin_svd(m, default_rank_tol(m)); }

int numerical_rank(const ThinSvd& svd) { return svd.rank(); }

Mat reconstruct(const ThinSvd& svd, int r) {
  const int k = svd.rank();
  const int keep = (r < 0 || r > k) ? k : r;
  const int m = svd.U.rows, n = svd.V.rows;
  if (keep == 0) return Mat::zeros(m, n);
  Mat us(m, keep);
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < keep; ++c) us(i, c) = svd.U(i, c) * svd.s[c];
  Mat vk(n, keep);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < keep; ++c) vk(i, c) = svd.V(i, c);
  return kernels::gemm_nt(us, vk);
}

Mat truncate_rank(const Mat& m, int r) {
  if (r < 0) throw std::invalid_argument("truncate_rank: negative rank");
  if (r == 0) return Mat::zeros(m.rows, m.cols);
  const ThinSvd svd = thin_svd(m);
  if (r >= svd.rank()) return m;
  return reconstruct(svd, r);
}

Mat svt(const Mat& m, double tau) {
  if (tau < 0.0) throw std::invalid_argument("svt: negative threshold");
  if (tau == 0.0) return m;
  ThinSvd svd = thin_svd(m, 0.0);
  int keep = 0;
  while (keep < svd.rank() && svd.s[keep] - tau > 0.0) ++keep;
  for (int c = 0; c < keep; ++c) svd.s[c] -= tau;
  return reconstruct(svd, keep);
}

Mat project_colspace(const ThinSvd& svd_x, const Mat& m) {
  if (m.rows != svd_x.U.rows)
    throw std::invalid_argument("project_colspace: row count mismatch");
  return kernels::gemm_nn(svd_x.U, kernels::gemm_tn(svd_x.U, m));
}

Mat project_rowspace(const ThinSvd& svd_x, const Mat& a) {
  if (a.rows != svd_x.V.rows)
    throw std::invalid_argument("project_rowspace: row count mismatch");
  return kernels::gemm_nn(svd_x.V, kernels::gemm_tn(svd_x.V, a));
}

Mat pinv_apply(const ThinSvd& svd_x, const Mat& m) {
  if (m.rows != svd_x.U.rows)
    throw std::invalid_argument("pinv_apply: row count mismatch");
  Mat t = kernels::gemm_tn(svd_x.U, m);  // k×cols
  for (int i = 0; i < t.rows; ++i)
    for (int j = 0; j < t.cols; ++j) t(i, j) /= svd_x.s[i];
  return kernels::gemm_nn(svd_x.V, t);
}

double op_norm(const Mat& m) {
  const ThinSvd svd = thin_svd(m, 0.0);
  return svd.rank() == 0 ? 0.0 : svd.s[0];
}

}  // namespace lowrr
