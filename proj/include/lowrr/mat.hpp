#pragma once

#include <cstddef>
#include <vector>

namespace lowrr {

/// Dense real matrix, row-major storage.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c);
  Mat(int r, int c, std::vector<double> entries);

  double& operator()(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  bool empty() const { return rows == 0 || cols == 0; }
  std::size_t size() const { return data.size(); }

  static Mat zeros(int r, int c) { return Mat(r, c); }
  static Mat identity(int n);
};

Mat diag_matrix(const std::vector<double>& d);
Mat transpose(const Mat& m);

bool all_finite(const Mat& m);
double max_abs(const Mat& m);
double max_abs_diff(const Mat& a, const Mat& b);

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double c, const Mat& m);

}  // namespace lowrr
