#pragma once

#include <cmath>
#include <algorithm>
#include <limits>

namespace febe {

struct Extremum {
  double x;
  double value;
};

/// Golden-section refinement of a unimodal maximum inside [lo, hi].
template <typename F>
Extremum golden_section_maximize(F&& f, double lo, double hi, double tolerance = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tolerance * (std::abs(a) + std::abs(b) + 1e-300)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Global maximum on [lo, hi]: uniform scan with `samples` intervals, then
/// golden-section refinement around the best sample.
template <typename F>
Extremum maximize_on_interval(F&& f, double lo, double hi, int samples) {
  const double step = (hi - lo) / samples;
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double v = f(lo + i * step);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = lo + std::max(best - 1, 0) * step;
  const double b = lo + std::min(best + 1, samples) * step;
  Extremum refined = golden_section_maximize(f, a, b);
  if (refined.value < best_value) refined = {lo + best * step, best_value};
  return refined;
}

}  // namespace febe
