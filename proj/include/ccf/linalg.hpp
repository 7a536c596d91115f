#pragma once
// Small dense vector/matrix helpers. Everything here is sized for
// desk-scale problems (a handful of transmitters and receivers), so the
// implementations favour clarity over asymptotics.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ccf {

using Vec = std::vector<double>;

struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  Vec col(int c) const {
    Vec v(rows);
    for (int r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
  }
  Vec row(int r) const {
    Vec v(cols);
    for (int c = 0; c < cols; ++c) v[c] = (*this)(r, c);
    return v;
  }
  bool operator==(const Mat&) const = default;
};

struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<long long> a;

  IntMat() = default;
  IntMat(int r, int c, long long fill = 0) : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw std::invalid_argument("IntMat: negative dimension");
  }

  long long& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  long long operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  std::vector<long long> col(int c) const {
    std::vector<long long> v(rows);
    for (int r = 0; r < rows; ++r) v[r] = (*this)(r, c);
    return v;
  }
  bool operator==(const IntMat&) const = default;
};

inline double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// squared Euclidean norm
inline double norm2(const Vec& x) { return dot(x, x); }

inline Vec hadamard(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("hadamard: size mismatch");
  Vec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] * y[i];
  return z;
}

inline Vec scale(const Vec& x, double c) {
  Vec z(x.size());
  for (size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
  return z;
}

inline double dot_int(const std::vector<long long>& a, const Vec& x) {
  if (a.size() != x.size()) throw std::invalid_argument("dot_int: size mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * x[i];
  return s;
}

inline double norm2_int(const std::vector<long long>& a) {
  double s = 0.0;
  for (long long v : a) s += static_cast<double>(v) * static_cast<double>(v);
  return s;
}

// Exact rank of a small integer matrix via fraction-free (Bareiss-style)
// elimination in 128-bit intermediates. Entries stay tiny at our scale, so
// overflow is not a practical concern, but the wide type keeps it honest.
inline int int_rank(const IntMat& m) {
  const int R = m.rows, C = m.cols;
  std::vector<__int128> w(static_cast<size_t>(R) * C);
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) w[static_cast<size_t>(r) * C + c] = m(r, c);
  auto at = [&](int r, int c) -> __int128& { return w[static_cast<size_t>(r) * C + c]; };

  int rank = 0;
  __int128 prev = 1;
  for (int c = 0; c < C && rank < R; ++c) {
    int pivot = -1;
    for (int r = rank; r < R; ++r)
      if (at(r, c) != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int cc = 0; cc < C; ++cc) std::swap(at(pivot, cc), at(rank, cc));
    for (int r = rank + 1; r < R; ++r) {
      for (int cc = c + 1; cc < C; ++cc)
        at(r, cc) = (at(rank, c) * at(r, cc) - at(r, c) * at(rank, cc)) / prev;
      at(r, c) = 0;
    }
    prev = at(rank, c);
    ++rank;
  }
  return rank;
}

inline double log2_safe(double x) {
  if (x <= 0.0) throw std::domain_error("log2_safe: non-positive argument");
  return std::log2(x);
}

// decibel conventions used throughout: value_db = 10*log10(value)
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
inline double to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace ccf
