#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qeskit {

// Uniform sample grid on [-L, L], symmetric about 0, odd point count.
struct Grid {
  double half_width = 10.0;
  int points = 4001;

  Grid() = default;
  Grid(double L, int n) : half_width(L), points(n) {
    if (!(L > 0.0) || n < 3 || n % 2 == 0)
      throw std::invalid_argument("Grid: need half_width > 0 and an odd point count >= 3");
  }

  double h() const { return 2.0 * half_width / double(points - 1); }
  double x(int i) const { return -half_width + h() * double(i); }

  std::vector<double> abscissas() const {
    std::vector<double> xs((std::size_t)points);
    for (int i = 0; i < points; ++i) xs[(std::size_t)i] = x(i);
    return xs;
  }

  // Index of the grid point nearest to y.
  int nearest(double y) const {
    double t = (y + half_width) / h();
    int i = (int)(t + 0.5);
    if (i < 0) i = 0;
    if (i >= points) i = points - 1;
    return i;
  }
};

}  // namespace qeskit
