#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "febe/types.hpp"

namespace febe {

/// Bessel functions of the first kind J_0(x) ... J_nmax(x), all orders from one
/// downward (Miller) recurrence normalized by J_0 + 2 sum_k J_2k = 1.
template <typename Scalar>
std::vector<Scalar> bessel_j_sequence(int n_max, Scalar x) {
  if (n_max < 0) throw DomainError("bessel_j_sequence: n_max must be >= 0");
  std::vector<Scalar> out(static_cast<std::size_t>(n_max) + 1, Scalar(0));
  if (x == Scalar(0)) {
    out[0] = Scalar(1);
    return out;
  }
  const bool negative = x < Scalar(0);
  const Scalar ax = std::abs(x);

  const double reach = std::max<double>(n_max, static_cast<double>(ax));
  int start = static_cast<int>(reach) + 30 + static_cast<int>(std::sqrt(60.0 * reach));
  start += start % 2;

  const Scalar big = Scalar(1e250);
  Scalar next = Scalar(0);  // J_{k+1}
  Scalar current = Scalar(1e-300);  // J_k
  Scalar even_sum = Scalar(0);
  for (int k = start; k > 0; --k) {
    const Scalar previous = Scalar(2 * k) / ax * current - next;  // J_{k-1}
    next = current;
    current = previous;
    if (std::abs(current) > big) {
      // Rescale everything accumulated so far.
      current /= big;
      next /= big;
      even_sum /= big;
      for (auto& v : out) v /= big;
    }
    const int order = k - 1;
    if (order <= n_max) out[static_cast<std::size_t>(order)] = current;
    if (order > 0 && order % 2 == 0) even_sum += current;
  }
  const Scalar norm = current + Scalar(2) * even_sum;
  for (auto& v : out) v /= norm;
  if (negative) {
    for (int n = 1; n <= n_max; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  }
  return out;
}

/// J_n(x) for any integer order (J_{-n} = (-1)^n J_n).
template <typename Scalar>
Scalar bessel_j(int n, Scalar x) {
  const int an = std::abs(n);
  const Scalar v = bessel_j_sequence(an, x)[static_cast<std::size_t>(an)];
  return (n < 0 && an % 2 == 1) ? -v : v;
}

/// Table of J_n(x) for n in [-n_max, n_max], indexable by signed order.
template <typename Scalar>
class BesselJTable {
 public:
  BesselJTable(int n_max, Scalar x) : n_max_(n_max), values_(bessel_j_sequence(n_max, x)) {}

  /// J_n(x); zero outside the tabulated range.
  Scalar operator()(int n) const {
    const int an = std::abs(n);
    if (an > n_max_) return Scalar(0);
    const Scalar v = values_[static_cast<std::size_t>(an)];
    return (n < 0 && an % 2 == 1) ? -v : v;
  }

  int n_max() const noexcept { return n_max_; }

 private:
  int n_max_;
  std::vector<Scalar> values_;
};

namespace detail {

// Ascending series, accurate for 0 < x <= 2.
template <typename Scalar>
std::pair<Scalar, Scalar> bessel_k01_series(Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar y = x * x / Scalar(4);
  const Scalar log_half = std::log(x / Scalar(2));
  const Scalar euler = std::numbers::egamma_v<Scalar>;

  // I0, I1 and the digamma-weighted sums.
  Scalar term0 = Scalar(1);  // y^k / (k!)^2
  Scalar term1 = Scalar(1);  // y^k / (k! (k+1)!)
  Scalar harmonic = Scalar(0);
  Scalar i0 = term0, k0_sum = Scalar(0);
  Scalar i1 = term1;
  Scalar k1_sum = term1 * (Scalar(1) - Scalar(2) * euler);  // psi(1) + psi(2)
  for (int k = 1; k < 200; ++k) {
    term0 *= y / Scalar(k * k);
    term1 *= y / Scalar(k * (k + 1));
    harmonic += Scalar(1) / Scalar(k);
    i0 += term0;
    k0_sum += term0 * harmonic;
    i1 += term1;
    // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
    k1_sum += term1 * (Scalar(2) * harmonic + Scalar(1) / Scalar(k + 1) - Scalar(2) * euler);
    if (term0 < eps * Scalar(1e-3) && term1 < eps * Scalar(1e-3)) break;
  }
  i1 *= x / Scalar(2);
  const Scalar k0 = -(log_half + euler) * i0 + k0_sum;
  const Scalar k1 = Scalar(1) / x + log_half * i1 - x / Scalar(4) * k1_sum;
  return {k0, k1};
}

// Steed's continued fraction (Temme's CF2) for x > 2.
template <typename Scalar>
std::pair<Scalar, Scalar> bessel_k01_continued_fraction(Scalar x) {
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar b = Scalar(2) * (Scalar(1) + x);
  Scalar d = Scalar(1) / b;
  Scalar h = d, delh = d;
  Scalar q1 = Scalar(0), q2 = Scalar(1);
  const Scalar a1 = Scalar(0.25);
  Scalar q = a1, c = a1, a = -a1;
  Scalar s = Scalar(1) + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= Scalar(2 * i);
    c = -a * c / Scalar(i + 1);
    const Scalar qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += Scalar(2);
    d = Scalar(1) / (b + a * d);
    delh = (b * d - Scalar(1)) * delh;
    h += delh;
    const Scalar dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps) break;
  }
  h *= a1;
  const Scalar k0 = std::sqrt(std::numbers::pi_v<Scalar> / (Scalar(2) * x)) * std::exp(-x) / s;
  const Scalar k1 = k0 * (x + Scalar(0.5) - h) / x;
  return {k0, k1};
}

// Hankel asymptotic expansion; for x >= 25 the optimally truncated series is
// far below double precision.
template <typename Scalar>
Scalar bessel_k_asymptotic(int order, Scalar x) {
  const Scalar mu = Scalar(4 * order * order);
  Scalar term = Scalar(1), sum = Scalar(1);
  for (int k = 1; k < 60; ++k) {
    const Scalar odd = Scalar(2 * k - 1);
    const Scalar next = term * (mu - odd * odd) / (Scalar(k) * Scalar(8) * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < std::numeric_limits<Scalar>::epsilon() * std::abs(sum)) break;
  }
  return std::sqrt(std::numbers::pi_v<Scalar> / (Scalar(2) * x)) * std::exp(-x) * sum;
}

}  // namespace detail

/// Modified Bessel function of the second kind K_order(x), order in {0, 1}.
template <typename Scalar>
Scalar modified_bessel_k(int order, Scalar x) {
  if (order != 0 && order != 1) throw DomainError("modified_bessel_k: order must be 0 or 1");
  if (!(x > Scalar(0))) throw DomainError("modified_bessel_k: argument must be positive");
  if (x <= Scalar(2)) {
    const auto [k0, k1] = detail::bessel_k01_series(x);
    return order == 0 ? k0 : k1;
  }
  if (x < Scalar(25)) {
    const auto [k0, k1] = detail::bessel_k01_continued_fraction(x);
    return order == 0 ? k0 : k1;
  }
  return detail::bessel_k_asymptotic(order, x);
}

template <typename Scalar>
Scalar bessel_k0(Scalar x) {
  return modified_bessel_k(0, x);
}

template <typename Scalar>
Scalar bessel_k1(Scalar x) {
  return modified_bessel_k(1, x);
}

/// Location and value of the first maximum of J_order on (0, inf).
struct BesselPeak {
  double argument;
  double value;
};

BesselPeak bessel_j_first_peak(int order);

}  // namespace febe
