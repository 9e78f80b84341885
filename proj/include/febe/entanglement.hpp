#pragma once

#include <array>
#include <vector>

#include "json.hpp"

#include "febe/scattering.hpp"
#include "febe/types.hpp"

namespace febe {

/// Pure state c1|1> + c2|2> of one atom.
struct AtomState {
  Complex c1{1.0, 0.0};
  Complex c2{0.0, 0.0};

  static AtomState ground() { return {}; }
  static AtomState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

/// Electron sideband shift (units of omega_a / v0) times two atom levels,
/// after one electron passes both atoms, kept through second order in g.
class TwoAtomJointState {
 public:
  static constexpr int kMaxShift = 2;

  Complex& at(int m, int a1, int a2);
  Complex at(int m, int a1, int a2) const;

  double norm() const;
  /// Squared norm of the branch with electron shift m.
  double branch_probability(int m) const;

 private:
  static std::size_t index(int m, int a1, int a2);
  std::array<Complex, (2 * kMaxShift + 1) * 4> amplitudes_{};
};

/// Atom 1 (coupling g1) scatters first, then atom 2 (g2). The electron is a
/// sharp momentum state. Throws DomainError for unnormalized atoms or |g| >= 0.1.
TwoAtomJointState sequential_scatter(Complex g1, Complex g2, const AtomState& atom1, const AtomState& atom2);

/// Two-qubit amplitudes ordered |11>, |12>, |21>, |22>.
struct PostSelectedPair {
  std::array<Complex, 4> amplitudes;
  double probability;

  Complex amplitude(int a1, int a2) const { return amplitudes[static_cast<std::size_t>(2 * (a1 - 1) + (a2 - 1))]; }
};

/// Conditions on the electron shift; throws DomainError for a missing or empty branch.
PostSelectedPair postselect(const TwoAtomJointState& state, int shift);

/// 2 |a12 a21 - a11 a22|.
double concurrence(const PostSelectedPair& pair);

/// Wootters concurrence of a two-qubit density matrix in the |11>, |12>, |21>, |22> basis.
double concurrence(const Eigen::Matrix4cd& rho);

struct PostSelectedMixed {
  Eigen::Matrix4cd rho;
  double probability;
};

/// Post-selection for mixed atom states by linear extension over their
/// eigen-decompositions.
PostSelectedMixed postselect_mixed(Complex g1, Complex g2, const DensityMatrix2& atom1, const DensityMatrix2& atom2,
                                   int shift);

/// List of {m, a1, a2, re, im} for every nonzero amplitude.
nlohmann::json to_json(const TwoAtomJointState& state);

}  // namespace febe
