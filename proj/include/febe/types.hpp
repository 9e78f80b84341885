#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace febe {

using Complex = std::complex<double>;

/// Vectorized 2x2 atom density matrix, ordered [rho11, rho22, rho12, rho21].
using Vector4c = Eigen::Vector4cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr Complex kI{0.0, 1.0};

/// Raised when an input lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a momentum grid cannot represent the requested state or shift.
class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& what, double deficit = 0.0)
      : std::runtime_error(what), deficit_(deficit) {}

  /// Missing probability (norm deficit) that triggered the error, when relevant.
  double deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

/// A result that is usable but computed outside the regime where its
/// approximation is trusted.
template <typename T>
struct Checked {
  T value;
  std::vector<std::string> warnings;

  bool ok() const noexcept { return warnings.empty(); }
};

}  // namespace febe
