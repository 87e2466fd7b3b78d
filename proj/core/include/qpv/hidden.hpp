#pragma once

#include <cstdint>
#include <string>

#include "qpv/bloch.hpp"
#include "qpv/linalg.hpp"

namespace qpv {

/// Default tolerance on verdict residuals and on 1 − trace distance.
inline constexpr double kVerdictTol = 1e-9;

/// Certification threshold on the squared membership residual
/// (1e-8 per-equation norm).
inline constexpr double kMembershipTol = 1e-16;

/// An isometry U : W ⊗ Q -> V1 ⊗ V2 together with a direction w in W and
/// a candidate qubit projector P. Q is always two-dimensional.
struct HiddenInstance {
  Matrix u;
  Eigen::Index w_dim = 1;
  Eigen::Index v1_dim = 1;
  Eigen::Index v2_dim = 1;
  Vector w;
  QubitProjector p;

  /// Validates shapes, the isometry condition, ‖w‖ = 1 and the dimension
  /// cap; throws std::invalid_argument on failure.
  void validate(double tol = kRankTol) const;
};

/// The two reshaped images Mat(U(w ⊗ e1)) and Mat(U(w ⊗ e2)), each a
/// v1 x v2 map V2 -> V1. For unit w they are orthonormal under the
/// Hilbert-Schmidt inner product.
struct SlicePair {
  Matrix r;
  Matrix s;
};

SlicePair channel_slices(const Matrix& u, Eigen::Index w_dim,
                         Eigen::Index v1_dim, Eigen::Index v2_dim,
                         const Vector& w);

/// Marginals on V1 and V2 of the channel output for the two input
/// branches P and I − P. With M = xR + yS and M' = -ȳR + x̄S these are
/// MM† and conj(M†M) (and likewise for M'): exactly the partial traces of
/// U(ww* ⊗ ·)U*.
struct BranchMarginals {
  Matrix v1_p, v2_p;        // branch P
  Matrix v1_comp, v2_comp;  // branch I − P
};

BranchMarginals branch_marginals(const HiddenInstance& inst);

struct HiddenVerdict {
  bool is_hidden = false;
  double residual_v1 = 0.0;
  double residual_v2 = 0.0;
  double dist_v1 = 0.0;  // (1/2)‖ρ − χ‖_1 on V1
  double dist_v2 = 0.0;
  std::string criterion;
  // Support-overlap diagnostics, populated by the marginal-distance
  // criterion only (−1 elsewhere).
  double support_overlap_v1 = -1.0;
  double support_overlap_v2 = -1.0;
};

/// Hidden iff the two branch outputs are distinguishable at trace
/// distance 1 on each side separately; residuals are 1 − dist.
HiddenVerdict check_marginal_distance(const HiddenInstance& inst,
                                      double tol = kVerdictTol);

/// Hidden iff (xR + yS)(-ȳR + x̄S)† = 0 and (xR + yS)†(-ȳR + x̄S) = 0;
/// residuals are the Frobenius norms of the two left-hand sides.
HiddenVerdict check_vector_equations(const HiddenInstance& inst,
                                     double tol = kVerdictTol);

/// Same condition expressed through the Gram block matrices
/// [[RR†, RS†],[SR†, SS†]] and [[R†R, R†S],[S†R, S†S]] sandwiched between
/// projector coefficient blocks. On unit inputs the residuals coincide
/// with those of check_vector_equations.
HiddenVerdict check_block_equations(const HiddenInstance& inst,
                                    double tol = kVerdictTol);

/// Squared residual of the defining polynomial system of the hidden-pair
/// set: both block equations evaluated at P_c (c unnormalized allowed)
/// plus the norm penalties (‖c‖²−1)² + (‖w‖²−1)². Zero exactly on the
/// hidden-pair set.
double hidden_set_residual(const Matrix& u, Eigen::Index w_dim,
                           Eigen::Index v1_dim, Eigen::Index v2_dim,
                           const Eigen::Vector3d& c, const Vector& w);

/// The same system as a stacked real residual vector (penalties first,
/// then real and imaginary parts of both matrix equations); its squared
/// norm equals hidden_set_residual.
Eigen::VectorXd hidden_set_residual_stack(const Matrix& u, Eigen::Index w_dim,
                                          Eigen::Index v1_dim,
                                          Eigen::Index v2_dim,
                                          const Eigen::Vector3d& c,
                                          const Vector& w);

/// Lower bound on ‖v − w‖ for two certified hidden pairs whose projectors
/// are at state angle theta: max(0, sqrt(2 − 4/(sin θ + 2 cos θ))),
/// clamped to 0 where the closed form is nonpositive. theta must lie in
/// [0, π/2].
double separation_lower_bound(double theta);

/// Onset of the clamp in separation_lower_bound, 2·atan(1/2).
double separation_bound_clamp_onset();

/// 4 · 7^(2n+2): ceiling on the number of distinct projectors occurring
/// in the hidden-pair set of a channel with dim W = n. Throws
/// std::overflow_error when the value exceeds 64 bits.
std::uint64_t distinct_basis_bound(unsigned n);

/// Copy isometry Q -> Q⊗Q for the basis {v, v⊥} of the given projector:
/// v -> v⊗v, v⊥ -> v⊥⊗v⊥. W is trivial (one-dimensional).
Matrix copy_isometry(const QubitProjector& basis);

}  // namespace qpv
