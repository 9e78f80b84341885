#include "febe/special_functions.hpp"

#include <cmath>

namespace febe {

BesselPeak bessel_j_first_peak(int order) {
  if (order < 0) throw DomainError("bessel_j_first_peak: order must be >= 0");
  if (order == 0) return {0.0, 1.0};

  // J' = (J_{n-1} - J_{n+1}) / 2 changes sign exactly once in this bracket.
  const auto slope = [order](double x) {
    const auto j = bessel_j_sequence(order + 1, x);
    return j[static_cast<std::size_t>(order - 1)] - j[static_cast<std::size_t>(order + 1)];
  };
  const double n = order;
  double lo = 0.5 * n;
  double hi = n + 2.0 * std::cbrt(n) + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  const double x = 0.5 * (lo + hi);
  return {x, bessel_j(order, x)};
}

}  // namespace febe
