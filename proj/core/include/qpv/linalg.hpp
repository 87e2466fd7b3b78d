#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qpv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for rank decisions and isometry checks.
inline constexpr double kRankTol = 1e-10;

/// Maximum asymmetry accepted before Hermitian symmetrization refuses.
inline constexpr double kHermTol = 1e-8;

/// Maximum dimension of a single declared register, and of any register
/// product that feeds a dense spectral decomposition. Overridable through
/// the QPVLAB_DIM_CAP environment variable.
Eigen::Index dimension_cap();

/// Ordered list of tensor-factor dimensions. Composite indices are
/// big-endian: the first factor is the most significant digit.
struct RegisterShape {
  std::vector<Eigen::Index> dims;

  Eigen::Index total() const;
  /// Throws std::invalid_argument unless total() == dim and each factor
  /// is positive.
  void validate_against(Eigen::Index dim) const;
};

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
Matrix tensor(const Matrix& a, const Matrix& b);

/// Reshapes a vector on H⊗J into the linear map J -> H whose (i,j) entry
/// is the coefficient of e_i ⊗ f_j.
Matrix mat_of_vec(const Vector& c, Eigen::Index rows, Eigen::Index cols);

/// Exact inverse of mat_of_vec.
Vector vec_of_mat(const Matrix& m);

/// Traces out every factor not listed in `keep` (indices into shape.dims,
/// strictly increasing). Kept factors stay in their original order.
Matrix partial_trace(const Matrix& m, const RegisterShape& shape,
                     const std::vector<int>& keep);

/// Reorders tensor factors: factor i of the result is factor perm[i] of
/// the input.
Vector permute_systems(const Vector& v, const RegisterShape& shape,
                       const std::vector<int>& perm);
Matrix permute_systems(const Matrix& m, const RegisterShape& shape,
                       const std::vector<int>& perm);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// (m + m†)/2 when the asymmetry ‖m − m†‖_F is below tol, otherwise
/// throws std::invalid_argument.
Matrix hermitize(const Matrix& m, double tol = kHermTol);

/// Orthogonal projector onto the span of eigenvectors of rho with
/// eigenvalue > tol. rho must be Hermitian within kHermTol.
Matrix support_projector(const Matrix& rho, double tol = kRankTol);

struct IsometryCheck {
  double residual = 0.0;  // ‖U†U − I‖_F
  bool ok = false;
};

/// Measures how far u is from satisfying U†U = I.
IsometryCheck check_isometry(const Matrix& u, double tol = kRankTol);

/// Applies op to the leading factor of a vector on (lead ⊗ trail).
Vector apply_to_leading(const Matrix& op, const Vector& v, Eigen::Index trail_dim);

/// Applies op to the trailing factor of a vector on (lead ⊗ trail).
Vector apply_to_trailing(const Matrix& op, const Vector& v, Eigen::Index lead_dim);

}  // namespace qpv
