#include "qeskit/numerics.hpp"

#include <cmath>

namespace qeskit::num {

long double bisect(const std::function<long double(long double)>& f, long double lo,
                   long double hi, long double tol) {
  long double flo = f(lo), fhi = f(hi);
  if (flo == 0.0L) return lo;
  if (fhi == 0.0L) return hi;
  if ((flo < 0.0L) == (fhi < 0.0L))
    throw std::invalid_argument("bisect: endpoints do not bracket a sign change");
  while (hi - lo > tol) {
    long double mid = 0.5L * (lo + hi);
    if (mid == lo || mid == hi) break;
    long double fm = f(mid);
    if (fm == 0.0L) return mid;
    if ((fm < 0.0L) == (flo < 0.0L)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

long double newton_refine(const std::function<long double(long double)>& f,
                          const std::function<long double(long double)>& df,
                          long double x0, long double lo, long double hi, int iters) {
  long double x = x0;
  for (int i = 0; i < iters; ++i) {
    long double d = df(x);
    if (d == 0.0L || !std::isfinite((double)d)) return x;
    long double next = x - f(x) / d;
    if (!(next >= lo && next <= hi)) return x;
    x = next;
  }
  return x;
}

}  // namespace qeskit::num
