#include "lowrr/mat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lowrr {

Mat::Mat(int r, int c) {
  if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  rows = r;
  cols = c;
  data.assign(static_cast<std::size_t>(r) * c, 0.0);
}

Mat::Mat(int r, int c, std::vector<double> entries) {
  if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  if (entries.size() != static_cast<std::size_t>(r) * c)
    throw std::invalid_argument("Mat: entry count does not match dimensions");
  rows = r;
  cols = c;
  data = std::move(entries);
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat diag_matrix(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

Mat transpose(const Mat& m) {
  Mat t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

bool all_finite(const Mat& m) {
  return std::all_of(m.data.begin(), m.data.end(),
                     [](double v) { return std::isfinite(v); });
}

double max_abs(const Mat& m) {
  double v = 0.0;
  for (double x : m.data) v = std::max(v, std::abs(x));
  return v;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    v = std::max(v, std::abs(a.data[i] - b.data[i]));
  return v;
}

static void check_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

Mat operator+(const Mat& a, const Mat& b) {
  check_same_shape(a, b, "Mat+");
  Mat c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = a.data[i] + b.data[i];
  return c;
}

Mat operator-(const Mat& a, const Mat& b) {
  check_same_shape(a, b, "Mat-");
  Mat c(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) c.data[i] = a.data[i] - b.data[i];
  return c;
}

Mat operator*(double c, const Mat& m) {
  Mat r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) r.data[i] = c * m.data[i];
  return r;
}

}  // namespace lowrr
