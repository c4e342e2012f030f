#pragma once

#include <array>
#include <functional>
#include <utility>

namespace qeskit {

// A smooth real function bundled with its first two derivatives.
// Builders that cannot supply a jet entry fill it with quiet NaN.
class SmoothFn {
 public:
  using Jet = std::array<long double, 3>;  // {f, f', f''}

  SmoothFn() = default;
  explicit SmoothFn(std::function<Jet(long double)> jet) : jet_(std::move(jet)) {}

  double operator()(double x) const { return (double)jet_((long double)x)[0]; }
  double deriv(double x) const { return (double)jet_((long double)x)[1]; }
  double deriv2(double x) const { return (double)jet_((long double)x)[2]; }
  Jet jet(long double x) const { return jet_(x); }

  explicit operator bool() const { return (bool)jet_; }

 private:
  std::function<Jet(long double)> jet_;
};

}  // namespace qeskit
