#pragma once

#include "lowrr/mat.hpp"

namespace lowrr::kernels {

/// Execution policy for the dense kernels. `parallel` uses OpenMP worksharing;
/// `serial` is the plain-loop reference implementation kept for testing and
/// benchmarking. Both policies produce the same per-element summation order,
/// so results do not depend on the thread count.
enum class Exec { serial, parallel };

Mat gemm_nn(const Mat& a, const Mat& b, Exec exec = Exec::parallel);  // A * B
Mat gemm_tn(const Mat& a, const Mat& b, Exec exec = Exec::parallel);  // A^T * B
Mat gemm_nt(const Mat& a, const Mat& b, Exec exec = Exec::parallel);  // A * B^T

double frob_norm_sq(const Mat& a, Exec exec = Exec::parallel);
double frob_dot(const Mat& a, const Mat& b, Exec exec = Exec::parallel);

}  // namespace lowrr::kernels
