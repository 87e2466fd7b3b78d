#include "qpv/hidden.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qpv {

void HiddenInstance::validate(double tol) const {
  if (w_dim <= 0 || v1_dim <= 0 || v2_dim <= 0)
    throw std::invalid_argument("instance dimensions must be positive");
  Eigen::Index cap = dimension_cap();
  if (w_dim > cap || v1_dim > cap || v2_dim > cap)
    throw std::invalid_argument("register dimension exceeds cap " + std::to_string(cap));
  if (u.rows() != v1_dim * v2_dim || u.cols() != w_dim * 2)
    throw std::invalid_argument("isometry must be (v1*v2) x (w*2), got " +
                                std::to_string(u.rows()) + "x" + std::to_string(u.cols()));
  if (!u.allFinite()) throw std::invalid_argument("isometry has non-finite entries");
  IsometryCheck iso = check_isometry(u, tol);
  if (!iso.ok)
    throw std::invalid_argument("U*U - I residual " + std::to_string(iso.residual) +
                                " exceeds tolerance");
  if (w.size() != w_dim) throw std::invalid_argument("w length does not match w_dim");
  if (std::abs(w.norm() - 1.0) > tol)
    throw std::invalid_argument("w must be a unit vector");
}

SlicePair channel_slices(const Matrix& u, Eigen::Index w_dim,
                         Eigen::Index v1_dim, Eigen::Index v2_dim,
                         const Vector& w) {
  if (u.rows() != v1_dim * v2_dim || u.cols() != w_dim * 2)
    throw std::invalid_argument("channel_slices: isometry shape mismatch");
  if (w.size() != w_dim) throw std::invalid_argument("channel_slices: w length mismatch");
  Vector in1 = Vector::Zero(w_dim * 2);
  Vector in2 = Vector::Zero(w_dim * 2);
  for (Eigen::Index i = 0; i < w_dim; ++i) {
    in1(2 * i) = w(i);
    in2(2 * i + 1) = w(i);
  }
  return {mat_of_vec(u * in1, v1_dim, v2_dim), mat_of_vec(u * in2, v1_dim, v2_dim)};
}

namespace {

struct BranchMats {
  Matrix m;       // xR + yS, the branch-P image
  Matrix m_comp;  // -ȳR + x̄S, the branch-(I−P) image
};

BranchMats branch_mats(const HiddenInstance& inst) {
  SlicePair rs = channel_slices(inst.u, inst.w_dim, inst.v1_dim, inst.v2_dim, inst.w);
  Complex x = inst.p.x, y = inst.p.y;
  return {x * rs.r + y * rs.s, -std::conj(y) * rs.r + std::conj(x) * rs.s};
}

}  // namespace

BranchMarginals branch_marginals(const HiddenInstance& inst) {
  BranchMats bm = branch_mats(inst);
  BranchMarginals out;
  out.v1_p = bm.m * bm.m.adjoint();
  out.v2_p = (bm.m.adjoint() * bm.m).conjugate();
  out.v1_comp = bm.m_comp * bm.m_comp.adjoint();
  out.v2_comp = (bm.m_comp.adjoint() * bm.m_comp).conjugate();
  // Tr P = Tr (I−P) = 1, so both branches carry unit trace.
  for (const Matrix* m : {&out.v1_p, &out.v2_p, &out.v1_comp, &out.v2_comp}) {
    if (std::abs(m->trace().real() - 1.0) > 1e-10 || std::abs(m->trace().imag()) > 1e-10)
      throw std::runtime_error("branch marginal trace deviates from 1");
  }
  return out;
}

HiddenVerdict check_marginal_distance(const HiddenInstance& inst, double tol) {
  BranchMarginals marg = branch_marginals(inst);
  HiddenVerdict v;
  v.criterion = "marginal-distance";
  v.dist_v1 = 0.5 * trace_norm(marg.v1_p - marg.v1_comp);
  v.dist_v2 = 0.5 * trace_norm(marg.v2_p - marg.v2_comp);
  v.residual_v1 = 1.0 - v.dist_v1;
  v.residual_v2 = 1.0 - v.dist_v2;
  v.is_hidden = v.dist_v1 > 1.0 - tol && v.dist_v2 > 1.0 - tol;
  v.support_overlap_v1 =
      (support_projector(marg.v1_p) * support_projector(marg.v1_comp)).norm();
  v.support_overlap_v2 =
      (support_projector(marg.v2_p) * support_projector(marg.v2_comp)).norm();
  return v;
}

namespace {

void fill_dists(const HiddenInstance& inst, HiddenVerdict& v) {
  BranchMarginals marg = branch_marginals(inst);
  v.dist_v1 = 0.5 * trace_norm(marg.v1_p - marg.v1_comp);
  v.dist_v2 = 0.5 * trace_norm(marg.v2_p - marg.v2_comp);
}

}  // namespace

HiddenVerdict check_vector_equations(const HiddenInstance& inst, double tol) {
  BranchMats bm = branch_mats(inst);
  HiddenVerdict v;
  v.criterion = "vector-equations";
  v.residual_v1 = (bm.m * bm.m_comp.adjoint()).norm();
  v.residual_v2 = (bm.m.adjoint() * bm.m_comp).norm();
  v.is_hidden = v.residual_v1 < tol && v.residual_v2 < tol;
  fill_dists(inst, v);
  return v;
}

namespace {

// [[a I, b I],[c I, d I]] acting blockwise on [T1; T2].
void sandwich_blocks(Complex a, Complex b, Complex c, Complex d, const Matrix& t1,
                     const Matrix& t2, Matrix& out1, Matrix& out2) {
  out1 = a * t1 + b * t2;
  out2 = c * t1 + d * t2;
}

// The two Gram block equations at entry values (p, q, r), each as four
// v x v blocks of L·G·R with G = [K1; K2][K1; K2]†.
struct EquationBlocks {
  std::array<Matrix, 4> first;
  std::array<Matrix, 4> second;
};

EquationBlocks equation_blocks(const Matrix& r, const Matrix& s, double p, Complex q,
                               double rr) {
  EquationBlocks out;
  // First equation, blocks RR†, RS†, SR†, SS†. The projector coefficients
  // enter conjugated ([[p, q̄],[q, r]]): with literal entries this product
  // tests the conjugate projector, not P.
  {
    Matrix a1, a2;  // rows of (P̄ ⊗ I) [K1; K2]
    sandwich_blocks(Complex(p, 0), std::conj(q), q, Complex(rr, 0), r, s, a1, a2);
    Matrix b1, b2;  // rows of ((I − P̄) ⊗ I) [K1; K2]
    sandwich_blocks(Complex(1.0 - p, 0), -std::conj(q), -q, Complex(1.0 - rr, 0), r, s,
                    b1, b2);
    out.first = {a1 * b1.adjoint(), a1 * b2.adjoint(), a2 * b1.adjoint(),
                 a2 * b2.adjoint()};
  }
  // Second equation, blocks R†R, R†S, S†R, S†S, literal coefficients.
  {
    Matrix k1 = r.adjoint(), k2 = s.adjoint();
    Matrix a1, a2;
    sandwich_blocks(Complex(p, 0), q, std::conj(q), Complex(rr, 0), k1, k2, a1, a2);
    Matrix b1, b2;
    sandwich_blocks(Complex(1.0 - p, 0), -q, -std::conj(q), Complex(1.0 - rr, 0), k1, k2,
                    b1, b2);
    out.second = {a1 * b1.adjoint(), a1 * b2.adjoint(), a2 * b1.adjoint(),
                  a2 * b2.adjoint()};
  }
  return out;
}

struct BlockResiduals {
  double first = 0.0;
  double second = 0.0;
};

BlockResiduals block_residuals(const Matrix& r, const Matrix& s, double p, Complex q,
                               double rr) {
  EquationBlocks eq = equation_blocks(r, s, p, q, rr);
  double sq1 = 0.0, sq2 = 0.0;
  for (const Matrix& b : eq.first) sq1 += b.squaredNorm();
  for (const Matrix& b : eq.second) sq2 += b.squaredNorm();
  return {std::sqrt(sq1), std::sqrt(sq2)};
}

}  // namespace

HiddenVerdict check_block_equations(const HiddenInstance& inst, double tol) {
  SlicePair rs = channel_slices(inst.u, inst.w_dim, inst.v1_dim, inst.v2_dim, inst.w);
  BlockResiduals res = block_residuals(rs.r, rs.s, inst.p.p, inst.p.q, inst.p.r);
  HiddenVerdict v;
  v.criterion = "block-equations";
  v.residual_v1 = res.first;
  v.residual_v2 = res.second;
  v.is_hidden = v.residual_v1 < tol && v.residual_v2 < tol;
  fill_dists(inst, v);
  return v;
}

Eigen::VectorXd hidden_set_residual_stack(const Matrix& u, Eigen::Index w_dim,
                                          Eigen::Index v1_dim,
                                          Eigen::Index v2_dim,
                                          const Eigen::Vector3d& c,
                                          const Vector& w) {
  SlicePair rs = channel_slices(u, w_dim, v1_dim, v2_dim, w);
  double p = 0.5 * (1.0 + c.z());
  Complex q(0.5 * c.x(), 0.5 * c.y());
  double r = 0.5 * (1.0 - c.z());
  EquationBlocks eq = equation_blocks(rs.r, rs.s, p, q, r);
  Eigen::Index entries = 0;
  for (const Matrix& b : eq.first) entries += b.size();
  for (const Matrix& b : eq.second) entries += b.size();
  Eigen::VectorXd stack(2 + 2 * entries);
  stack(0) = c.squaredNorm() - 1.0;
  stack(1) = w.squaredNorm() - 1.0;
  Eigen::Index pos = 2;
  auto push = [&](const Matrix& b) {
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        stack(pos++) = b(i, j).real();
        stack(pos++) = b(i, j).imag();
      }
  };
  for (const Matrix& b : eq.first) push(b);
  for (const Matrix& b : eq.second) push(b);
  return stack;
}

double hidden_set_residual(const Matrix& u, Eigen::Index w_dim,
                           Eigen::Index v1_dim, Eigen::Index v2_dim,
                           const Eigen::Vector3d& c, const Vector& w) {
  return hidden_set_residual_stack(u, w_dim, v1_dim, v2_dim, c, w).squaredNorm();
}

double separation_lower_bound(double theta) {
  constexpr double half_pi = 1.5707963267948966;
  if (!(theta >= -1e-12 && theta <= half_pi + 1e-12))
    throw std::invalid_argument("separation_lower_bound: angle outside [0, pi/2]");
  double raw = 2.0 - 4.0 / (std::sin(theta) + 2.0 * std::cos(theta));
  if (raw <= 0.0) return 0.0;
  return std::sqrt(raw);
}

double separation_bound_clamp_onset() { return 2.0 * std::atan(0.5); }

std::uint64_t distinct_basis_bound(unsigned n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value = 4;
  for (unsigned k = 0; k < 2 * n + 2; ++k) {
    if (value > max / 7) throw std::overflow_error("distinct_basis_bound overflows 64 bits");
    value *= 7;
  }
  return value;
}

Matrix copy_isometry(const QubitProjector& basis) {
  Eigen::Vector2cd v(basis.x, basis.y);
  Eigen::Vector2cd vp = basis.perp_statevec();
  Matrix u(4, 2);
  // Columns are the images of e1, e2 expanded in {v, v⊥}.
  Vector vv(4), pp(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      vv(2 * i + j) = v(i) * v(j);
      pp(2 * i + j) = vp(i) * vp(j);
    }
  for (int e = 0; e < 2; ++e) {
    Complex cv = std::conj(v(e));
    Complex cp = std::conj(vp(e));
    u.col(e) = cv * vv + cp * pp;
  }
  return u;
}

}  // namespace qpv
