#pragma once

#include <Eigen/Dense>

#include "qpv/linalg.hpp"

namespace qpv {

// Pauli operators. Note the sign convention Y = [[0, i], [-i, 0]], the
// negative of the more common choice; every Bloch-vector formula in this
// library is relative to it.
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

/// A rank-1 projector on C^2 carried in three equivalent forms:
///   entry form  [[p, q], [q̄, r]],
///   Bloch form  (I + c1 X + c2 Y + c3 Z)/2 with ‖c‖ = 1,
///   vector form (x, y) with the projector equal to (x,y)(x,y)*.
/// The state vector is gauge fixed: its first component of magnitude
/// above 1e-12 is real and nonnegative.
struct QubitProjector {
  double p = 1.0;
  Complex q{0.0, 0.0};
  double r = 0.0;
  Eigen::Vector3d bloch{0.0, 0.0, 1.0};
  Complex x{1.0, 0.0};
  Complex y{0.0, 0.0};

  Eigen::Matrix2cd matrix() const;
  Eigen::Matrix2cd complement() const;  // I - P
  /// Gauge-fixed unit vector spanning the orthogonal complement.
  Eigen::Vector2cd perp_statevec() const;

  static QubitProjector from_bloch(const Eigen::Vector3d& c);
  static QubitProjector from_statevec(Complex x, Complex y);
};

/// ‖P − L‖_1. Equals 2 sin(state_angle(P, L)).
double trace_distance(const QubitProjector& a, const QubitProjector& b);

/// arccos |⟨v_P, v_L⟩| in [0, π/2]; half the Bloch-sphere angle.
double state_angle(const QubitProjector& a, const QubitProjector& b);

/// Unitary u with u P u† the projector onto (1,0) and u L u† the projector
/// onto (cos θ, sin θ), θ = state_angle(P, L). Degenerate pairs (θ = 0 or
/// π/2) fall back to a deterministic completion of the basis.
Eigen::Matrix2cd canonical_pair_basis(const QubitProjector& p,
                                      const QubitProjector& l);

}  // namespace qpv
