#include "febe/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>

namespace febe {

namespace {

constexpr double kCouplingLimit = 0.1;

void check_atom(const AtomState& atom, const char* name) {
  const double norm = std::norm(atom.c1) + std::norm(atom.c2);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw DomainError(std::string("sequential_scatter: ") + name + " state is not normalized");
  }
}

// Amplitudes split by order in the couplings; layer k holds the O(g^k) part.
// The electron index is kept wider than the final window so intermediate
// products never fall off the edge.
struct Layered {
  static constexpr int kShift = 2;
  static constexpr int kOrders = 3;
  std::array<std::array<Complex, (2 * kShift + 1) * 4>, kOrders> layer{};

  static std::size_t index(int m, int a1, int a2) {
    return static_cast<std::size_t>(((m + kShift) * 2 + (a1 - 1)) * 2 + (a2 - 1));
  }
  Complex& at(int order, int m, int a1, int a2) { return layer[static_cast<std::size_t>(order)][index(m, a1, a2)]; }
};

// 1 - i H - H^2 / 2 with H = g b sigma_+ + g* b^dag sigma_- on atom `which`;
// H^2 = |g|^2 on a sharp ladder. Terms above second order are dropped.
Layered scatter(const Layered& in, Complex g, int which) {
  Layered out = in;
  const double g2 = std::norm(g);
  for (int order = 0; order < Layered::kOrders; ++order) {
    for (int m = -Layered::kShift; m <= Layered::kShift; ++m) {
      for (int a1 = 1; a1 <= 2; ++a1) {
        for (int a2 = 1; a2 <= 2; ++a2) {
          const Complex c = in.layer[static_cast<std::size_t>(order)][Layered::index(m, a1, a2)];
          if (c == Complex{}) continue;
          if (order + 2 < Layered::kOrders) out.at(order + 2, m, a1, a2) -= 0.5 * g2 * c;
          if (order + 1 >= Layered::kOrders) continue;
          const int level = which == 1 ? a1 : a2;
          // b sigma_+ : electron loses one quantum, atom goes up.
          const int m_new = level == 1 ? m - 1 : m + 1;
          const Complex weight = level == 1 ? g : std::conj(g);
          if (std::abs(m_new) > Layered::kShift) {
            throw DomainError("sequential_scatter: electron shift outside retained window");
          }
          const int b1 = which == 1 ? 3 - a1 : a1;
          const int b2 = which == 2 ? 3 - a2 : a2;
          out.at(order + 1, m_new, b1, b2) += -kI * weight * c;
        }
      }
    }
  }
  return out;
}

}  // namespace

std::size_t TwoAtomJointState::index(int m, int a1, int a2) {
  if (std::abs(m) > kMaxShift || a1 < 1 || a1 > 2 || a2 < 1 || a2 > 2) {
    throw DomainError("TwoAtomJointState: index out of range");
  }
  return static_cast<std::size_t>(((m + kMaxShift) * 2 + (a1 - 1)) * 2 + (a2 - 1));
}

Complex& TwoAtomJointState::at(int m, int a1, int a2) { return amplitudes_[index(m, a1, a2)]; }
Complex TwoAtomJointState::at(int m, int a1, int a2) const { return amplitudes_[index(m, a1, a2)]; }

double TwoAtomJointState::norm() const {
  double total = 0.0;
  for (const auto& c : amplitudes_) total += std::norm(c);
  return total;
}

double TwoAtomJointState::branch_probability(int m) const {
  double total = 0.0;
  for (int a1 = 1; a1 <= 2; ++a1)
    for (int a2 = 1; a2 <= 2; ++a2) total += std::norm(at(m, a1, a2));
  return total;
}

TwoAtomJointState sequential_scatter(Complex g1, Complex g2, const AtomState& atom1, const AtomState& atom2) {
  check_atom(atom1, "atom 1");
  check_atom(atom2, "atom 2");
  if (!(std::abs(g1) < kCouplingLimit) || !(std::abs(g2) < kCouplingLimit)) {
    throw DomainError("sequential_scatter: |g| must be below 0.1 for second-order truncation");
  }
  Layered state;
  const std::array<Complex, 2> c1{atom1.c1, atom1.c2}, c2{atom2.c1, atom2.c2};
  for (int a1 = 1; a1 <= 2; ++a1)
    for (int a2 = 1; a2 <= 2; ++a2) state.at(0, 0, a1, a2) = c1[a1 - 1] * c2[a2 - 1];

  state = scatter(scatter(state, g1, 1), g2, 2);

  TwoAtomJointState out;
  for (int m = -Layered::kShift; m <= Layered::kShift; ++m)
    for (int a1 = 1; a1 <= 2; ++a1)
      for (int a2 = 1; a2 <= 2; ++a2) {
        Complex sum{};
        for (const auto& layer : state.layer) sum += layer[Layered::index(m, a1, a2)];
        out.at(m, a1, a2) = sum;
      }
  return out;
}

PostSelectedPair postselect(const TwoAtomJointState& state, int shift) {
  if (std::abs(shift) > TwoAtomJointState::kMaxShift) {
    throw DomainError("postselect: shift " + std::to_string(shift) + " is not represented");
  }
  const double probability = state.branch_probability(shift);
  if (!(probability > 0.0)) {
    throw DomainError("postselect: branch with shift " + std::to_string(shift) + " is empty");
  }
  PostSelectedPair pair{{}, probability};
  const double scale = 1.0 / std::sqrt(probability);
  for (int a1 = 1; a1 <= 2; ++a1)
    for (int a2 = 1; a2 <= 2; ++a2)
      pair.amplitudes[static_cast<std::size_t>(2 * (a1 - 1) + (a2 - 1))] = scale * state.at(shift, a1, a2);
  return pair;
}

double concurrence(const PostSelectedPair& pair) {
  const auto& a = pair.amplitudes;
  return std::min(1.0, 2.0 * std::abs(a[1] * a[2] - a[0] * a[3]));
}

double concurrence(const Eigen::Matrix4cd& rho) {
  // R = rho (sy x sy) rho* (sy x sy); C = max(0, l1 - l2 - l3 - l4) over sqrt eigenvalues.
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = flip * rho.conjugate() * flip;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(rho * tilde, false);
  std::array<double, 4> lambda{};
  for (int i = 0; i < 4; ++i) lambda[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, solver.eigenvalues()[i].real()));
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

PostSelectedMixed postselect_mixed(Complex g1, Complex g2, const DensityMatrix2& atom1, const DensityMatrix2& atom2,
                                   int shift) {
  atom1.validate(1e-10);
  atom2.validate(1e-10);
  const auto decompose = [](const DensityMatrix2& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix2c> solver(rho.matrix());
    std::vector<std::pair<double, AtomState>> parts;
    for (int i = 0; i < 2; ++i) {
      const double weight = solver.eigenvalues()[i];
      if (weight <= 1e-15) continue;
      const Eigen::Vector2cd v = solver.eigenvectors().col(i).normalized();
      parts.push_back({weight, AtomState{v[0], v[1]}});
    }
    return parts;
  };
  PostSelectedMixed out{Eigen::Matrix4cd::Zero(), 0.0};
  for (const auto& [w1, s1] : decompose(atom1)) {
    for (const auto& [w2, s2] : decompose(atom2)) {
      const TwoAtomJointState state = sequential_scatter(g1, g2, s1, s2);
      Eigen::Vector4cd branch;
      for (int a1 = 1; a1 <= 2; ++a1)
        for (int a2 = 1; a2 <= 2; ++a2) branch[2 * (a1 - 1) + (a2 - 1)] = state.at(shift, a1, a2);
      out.rho += w1 * w2 * branch * branch.adjoint();
    }
  }
  out.probability = out.rho.trace().real();
  if (!(out.probability > 0.0)) {
    throw DomainError("postselect_mixed: branch with shift " + std::to_string(shift) + " is empty");
  }
  out.rho /= out.probability;
  return out;
}

nlohmann::json to_json(const TwoAtomJointState& state) {
  nlohmann::json out = nlohmann::json::array();
  for (int m = -TwoAtomJointState::kMaxShift; m <= TwoAtomJointState::kMaxShift; ++m)
    for (int a1 = 1; a1 <= 2; ++a1)
      for (int a2 = 1; a2 <= 2; ++a2) {
        const Complex c = state.at(m, a1, a2);
        if (c == Complex{}) continue;
        out.push_back({{"m", m}, {"a1", a1}, {"a2", a2}, {"re", c.real()}, {"im", c.imag()}});
      }
  return out;
}

}  // namespace febe
