#include "qpv/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, kI, -kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd QubitProjector::matrix() const {
  Eigen::Matrix2cd m;
  m << Complex(p, 0.0), q, std::conj(q), Complex(r, 0.0);
  return m;
}

Eigen::Matrix2cd QubitProjector::complement() const {
  return Eigen::Matrix2cd::Identity() - matrix();
}

Eigen::Vector2cd QubitProjector::perp_statevec() const {
  // (x, y) -> (-ȳ, x̄) is orthogonal; re-gauge so the first component of
  // magnitude above 1e-12 is real nonnegative.
  Complex px = -std::conj(y);
  Complex py = std::conj(x);
  Complex lead = (std::abs(px) > 1e-12) ? px : py;
  Complex phase = (std::abs(lead) > 0.0) ? std::conj(lead) / std::abs(lead) : Complex(1.0, 0.0);
  return Eigen::Vector2cd(px * phase, py * phase);
}

QubitProjector QubitProjector::from_bloch(const Eigen::Vector3d& c) {
  double norm = c.norm();
  if (norm < 1e-12) throw std::invalid_argument("Bloch vector must be nonzero");
  Eigen::Vector3d u = c / norm;
  QubitProjector out;
  out.bloch = u;
  out.p = 0.5 * (1.0 + u.z());
  out.q = Complex(0.5 * u.x(), 0.5 * u.y());
  out.r = 0.5 * (1.0 - u.z());

  // Stable eigenvector of the rank-1 projector: the dominant column of
  // [[p, q], [q̄, r]] normalized, then gauge fixed.
  if (out.p >= out.r) {
    double nrm = std::sqrt(out.p);
    out.x = Complex(nrm, 0.0);
    out.y = std::conj(out.q) / nrm;
  } else {
    double nrm = std::sqrt(out.r);
    Complex x0 = out.q / nrm;
    Complex y0 = Complex(nrm, 0.0);
    if (std::abs(x0) > 1e-12) {
      Complex phase = std::conj(x0) / std::abs(x0);
      x0 *= phase;
      y0 *= phase;
    } else {
      x0 = Complex(0.0, 0.0);
    }
    out.x = x0;
    out.y = y0;
  }
  return out;
}

QubitProjector QubitProjector::from_statevec(Complex x, Complex y) {
  double norm = std::sqrt(std::norm(x) + std::norm(y));
  if (norm < 1e-12) throw std::invalid_argument("state vector must be nonzero");
  x /= norm;
  y /= norm;
  Complex lead = (std::abs(x) > 1e-12) ? x : y;
  Complex phase = std::conj(lead) / std::abs(lead);
  x *= phase;
  y *= phase;
  if (std::abs(x) <= 1e-12) x = Complex(0.0, 0.0);

  QubitProjector out;
  out.x = x;
  out.y = y;
  out.p = std::norm(x);
  out.q = x * std::conj(y);
  out.r = std::norm(y);
  out.bloch = Eigen::Vector3d(2.0 * out.q.real(), 2.0 * out.q.imag(), out.p - out.r);
  return out;
}

double trace_distance(const QubitProjector& a, const QubitProjector& b) {
  return trace_norm(a.matrix() - b.matrix());
}

double state_angle(const QubitProjector& a, const QubitProjector& b) {
  Complex overlap = std::conj(a.x) * b.x + std::conj(a.y) * b.y;
  double mag = std::clamp(std::abs(overlap), 0.0, 1.0);
  return std::acos(mag);
}

Eigen::Matrix2cd canonical_pair_basis(const QubitProjector& p,
                                      const QubitProjector& l) {
  Eigen::Vector2cd v1(p.x, p.y);
  Eigen::Vector2cd vl(l.x, l.y);

  // Re-phase L's vector so its overlap with v1 is real nonnegative, then
  // split off the orthogonal component.
  Complex overlap = v1.dot(vl);  // conjugates the first argument
  if (std::abs(overlap) > 1e-12) vl *= std::conj(overlap) / std::abs(overlap);

  Eigen::Vector2cd w = vl - v1 * v1.dot(vl);
  Eigen::Vector2cd v2;
  if (w.norm() > 1e-9) {
    v2 = w / w.norm();
  } else {
    // Degenerate angle: complete with the gauge-fixed orthogonal vector.
    v2 = p.perp_statevec();
  }

  Eigen::Matrix2cd u;
  u.row(0) = v1.adjoint();
  u.row(1) = v2.adjoint();
  return u;
}

}  // namespace qpv
