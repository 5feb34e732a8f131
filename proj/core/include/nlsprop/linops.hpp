#pragma once

#include <string>

#include "nlsprop/model.hpp"
#include "nlsprop/profile.hpp"
#include "nlsprop/soliton.hpp"

namespace nlsprop {

enum class Sign { Plus, Minus };
enum class Family { L, DistortedL };

/// Harmonic k (3D) or parity class (1D).
struct Sector {
  enum class Kind { Harmonic, Parity };
  Kind kind = Kind::Harmonic;
  int k = 0;  // harmonic index, or 0 = even / 1 = odd

  static Sector harmonic(int k);
  static Sector even() { return {Kind::Parity, 0}; }
  static Sector odd() { return {Kind::Parity, 1}; }

  bool is_parity() const { return kind == Kind::Parity; }
  bool odd_like() const { return is_parity() ? k == 1 : k >= 1; }
  /// Exponent of the origin behaviour u ~ r^p (k for harmonics, 0/1 for parity).
  int origin_power() const { return k; }
  std::string label() const;  // "k=2", "even", "odd"
  bool operator==(const Sector&) const = default;
};

struct PotentialPair {
  Profile plus;
  Profile minus;
};

struct LinearOperator {
  Sign sign = Sign::Plus;
  Family family = Family::L;
  Sector sector;
  int dimension = 3;
  Profile potential;
  double delta0 = 0.0;
  double omega_shift = 0.0;

  /// potential(r) - delta0 e^{-r} + omega_shift, with potential = 0 past its mesh.
  double total_potential(double r) const;
  /// Centrifugal coefficient k(k+d-2) (0 in 1D).
  double centrifugal() const;
  std::string label() const;  // e.g. "L+^(0)", "calL-^(e)"
};

/// V+ = -f(R^2) - 2 f'(R^2) R^2 and V- = -f(R^2) on the soliton mesh.
PotentialPair build_linearized_potentials(const ProblemSpec& spec, const SolitonData& soliton);

/// calV+ = r (3 f' + 2 f'' R^2) R R' and calV- = r f' R R' on the soliton mesh.
PotentialPair build_distorted_potentials(const ProblemSpec& spec, const SolitonData& soliton);

/// Throws SectorMismatch unless Harmonic goes with 3D and Parity with 1D.
LinearOperator make_operator(const Profile& potential, Sign sign, Family family, Sector sector,
                             int dimension, double delta0 = 0.0, double omega_shift = 0.0);

/// Builds the potential from the soliton (omega_shift = omega for family L, 0 otherwise).
LinearOperator make_operator(const ProblemSpec& spec, const SolitonData& soliton, Sign sign,
                             Family family, Sector sector, double delta0 = 0.0);

/// Pointwise action at every node of u's mesh. u'' comes from five-point
/// differentiation of the stored first derivatives of u.
Profile apply_operator(const LinearOperator& op, const Profile& u);

/// Point-transformed action on W with u = r^k W:
/// -W'' - ((d-1+2k)/r) W' + (potential ...) W.
Profile apply_transformed(const LinearOperator& op, const Profile& W);

struct DecayFit {
  double C = 0.0;
  double kappa = 0.0;
  int points = 0;
  bool decays = false;  // kappa > 0 and the bound holds on the fit window
};

/// Least-squares fit of log|v| = log C - kappa r over the resolved tail (values
/// between 1e-4 and 1e-14 of the peak, beyond the last point above 1e-4);
/// C is then raised so the bound holds on that window.
DecayFit fit_decay(const Profile& v);

}  // namespace nlsprop
