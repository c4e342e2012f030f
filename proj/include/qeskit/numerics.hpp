#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qeskit::num {

// Composite Simpson rule over uniformly spaced samples. Requires an odd
// number of points (an even number of intervals).
template <typename T>
T simpson(const std::vector<T>& f, T h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("simpson: need an odd number of samples (>= 3)");
  T odd = 0, even = 0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += f[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += f[i];
  return h / T(3) * (f[0] + f[n - 1] + T(4) * odd + T(2) * even);
}

// Cumulative integral C with C[0] = 0, fourth-order accurate at every grid
// point. Interior intervals use the 4-point closed Newton-Cotes increment
// centred on the interval; the first and last use one-sided variants.
template <typename T>
std::vector<T> cumulative(const std::vector<T>& f, T h) {
  const std::size_t n = f.size();
  if (n < 4) throw std::invalid_argument("cumulative: need at least 4 samples");
  std::vector<T> c(n);
  c[0] = T(0);
  const T k = h / T(24);
  c[1] = c[0] + k * (T(9) * f[0] + T(19) * f[1] - T(5) * f[2] + f[3]);
  for (std::size_t i = 1; i + 2 < n; ++i)
    c[i + 1] = c[i] + k * (-f[i - 1] + T(13) * f[i] + T(13) * f[i + 1] - f[i + 2]);
  c[n - 1] = c[n - 2] +
             k * (T(9) * f[n - 1] + T(19) * f[n - 2] - T(5) * f[n - 3] + f[n - 4]);
  return c;
}

// Fourth-order first derivative of uniformly spaced samples (5-point
// central stencil, one-sided stencils of the same order at the edges).
template <typename T>
std::vector<T> derivative1(const std::vector<T>& f, T h) {
  const std::size_t n = f.size();
  if (n < 5) throw std::invalid_argument("derivative1: need at least 5 samples");
  std::vector<T> d(n);
  const T k = T(1) / (T(12) * h);
  d[0] = k * (T(-25) * f[0] + T(48) * f[1] - T(36) * f[2] + T(16) * f[3] - T(3) * f[4]);
  d[1] = k * (T(-3) * f[0] - T(10) * f[1] + T(18) * f[2] - T(6) * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = k * (f[i - 2] - T(8) * f[i - 1] + T(8) * f[i + 1] - f[i + 2]);
  d[n - 2] = -k * (T(-3) * f[n - 1] - T(10) * f[n - 2] + T(18) * f[n - 3] -
                   T(6) * f[n - 4] + f[n - 5]);
  d[n - 1] = -k * (T(-25) * f[n - 1] + T(48) * f[n - 2] - T(36) * f[n - 3] +
                   T(16) * f[n - 4] - T(3) * f[n - 5]);
  return d;
}

// Fourth-order second derivative (5-point central stencil, 6-point
// one-sided stencils at the edges).
template <typename T>
std::vector<T> derivative2(const std::vector<T>& f, T h) {
  const std::size_t n = f.size();
  if (n < 6) throw std::invalid_argument("derivative2: need at least 6 samples");
  std::vector<T> d(n);
  const T k = T(1) / (T(12) * h * h);
  d[0] = k * (T(45) * f[0] - T(154) * f[1] + T(214) * f[2] - T(156) * f[3] +
              T(61) * f[4] - T(10) * f[5]);
  d[1] = k * (T(10) * f[0] - T(15) * f[1] - T(4) * f[2] + T(14) * f[3] - T(6) * f[4] +
              f[5]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = k * (-f[i - 2] + T(16) * f[i - 1] - T(30) * f[i] + T(16) * f[i + 1] -
                f[i + 2]);
  d[n - 2] = k * (T(10) * f[n - 1] - T(15) * f[n - 2] - T(4) * f[n - 3] +
                  T(14) * f[n - 4] - T(6) * f[n - 5] + f[n - 6]);
  d[n - 1] = k * (T(45) * f[n - 1] - T(154) * f[n - 2] + T(214) * f[n - 3] -
                  T(156) * f[n - 4] + T(61) * f[n - 5] - T(10) * f[n - 6]);
  return d;
}

// Barycentric Lagrange interpolation through a small set of nodes.
template <typename T>
class Barycentric {
 public:
  Barycentric(std::vector<T> nodes, std::vector<T> values)
      : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size() || nodes_.size() < 2)
      throw std::invalid_argument("Barycentric: need matching node/value lists (>= 2)");
    weights_.assign(nodes_.size(), T(1));
    for (std::size_t j = 0; j < nodes_.size(); ++j)
      for (std::size_t k = 0; k < nodes_.size(); ++k)
        if (k != j) weights_[j] /= (nodes_[j] - nodes_[k]);
  }

  T operator()(T x) const {
    T num = 0, den = 0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      T dx = x - nodes_[j];
      if (dx == T(0)) return values_[j];
      T w = weights_[j] / dx;
      num += w * values_[j];
      den += w;
    }
    return num / den;
  }

 private:
  std::vector<T> nodes_, values_, weights_;
};

// Bisection on a bracketing interval [lo, hi] (f(lo) and f(hi) of opposite
// sign), followed by no refinement; returns the midpoint of the final
// bracket of width <= tol.
long double bisect(const std::function<long double(long double)>& f, long double lo,
                   long double hi, long double tol);

// A few Newton steps from x0; falls back to x0 if the derivative vanishes
// or an iterate leaves [lo, hi].
long double newton_refine(const std::function<long double(long double)>& f,
                          const std::function<long double(long double)>& df,
                          long double x0, long double lo, long double hi, int iters);

}  // namespace qeskit::num
