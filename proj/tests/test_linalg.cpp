#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qpv/bloch.hpp"
#include "qpv/hidden.hpp"
#include "qpv/linalg.hpp"

using namespace qpv;

TEST_CASE("tensor of identities") {
  Matrix i2 = Matrix::Identity(2, 2);
  Matrix i3 = Matrix::Identity(3, 3);
  CHECK((tensor(i2, i3) - Matrix::Identity(6, 6)).norm() == 0.0);
}

TEST_CASE("tensor of diagonal Paulis") {
  Matrix z = pauli_z();
  Matrix zz = tensor(z, z);
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 1, -1, -1, 1;
  CHECK((zz - expected).norm() == 0.0);
}

TEST_CASE("tensor shape law") {
  Matrix a = Matrix::Random(2, 2);
  Matrix b = Matrix::Random(3, 3);
  Matrix t = tensor(a, b);
  CHECK(t.rows() == 6);
  CHECK(t.cols() == 6);
}

TEST_CASE("tensor associativity") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(-3, 3);
  // Integer entries make the products exactly representable, so the two
  // association orders agree bitwise.
  auto int_matrix = [&](int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = Complex(small(rng), small(rng));
    return m;
  };
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = int_matrix(2, 3), b = int_matrix(3, 2), c = int_matrix(2, 2);
    CHECK((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).norm() == 0.0);
  }
  // Generic complex entries agree to roundoff.
  Matrix a = Matrix::Random(3, 2), b = Matrix::Random(2, 3), c = Matrix::Random(2, 2);
  CHECK((tensor(tensor(a, b), c) - tensor(a, tensor(b, c))).norm() < 1e-14);
}

TEST_CASE("mat_of_vec maximally entangled") {
  double s = 1.0 / std::sqrt(2.0);
  Vector c(4);
  c << s, 0, 0, s;
  Matrix m = mat_of_vec(c, 2, 2);
  CHECK((m - s * Matrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("mat_of_vec basis case") {
  Vector c = Vector::Zero(4);
  c(1) = 1.0;  // e1 ⊗ e2
  Matrix m = mat_of_vec(c, 2, 2);
  CHECK(m(0, 1) == Complex(1.0, 0.0));
  CHECK(m.cwiseAbs().sum() == 1.0);
}

TEST_CASE("mat_of_vec shape mismatch") {
  Vector c = Vector::Zero(5);
  CHECK_THROWS_AS(mat_of_vec(c, 2, 2), std::invalid_argument);
}

TEST_CASE("mat_of_vec and vec_of_mat are mutually inverse") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Vector c = oracles::random_state(rng, 12);
    Matrix m = mat_of_vec(c, 3, 4);
    CHECK((vec_of_mat(m) - c).norm() == 0.0);
    CHECK((mat_of_vec(vec_of_mat(m), 3, 4) - m).norm() == 0.0);
  }
}

TEST_CASE("partial trace of the EPR density matrix") {
  double s = 1.0 / std::sqrt(2.0);
  Vector epr(4);
  epr << s, 0, 0, s;
  Matrix rho = epr * epr.adjoint();
  Matrix marginal = partial_trace(rho, {{2, 2}}, {1});
  CHECK((marginal - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("partial trace of a product state") {
  std::mt19937_64 rng(5);
  Vector a = oracles::random_state(rng, 3);
  Vector b = oracles::random_state(rng, 4);
  Matrix rho = a * a.adjoint();
  Matrix sigma = 0.7 * (b * b.adjoint());
  Matrix joint = tensor(rho, sigma);
  Matrix kept = partial_trace(joint, {{3, 4}}, {0});
  CHECK((kept - rho * sigma.trace()).norm() < 1e-14);
}

TEST_CASE("partial trace keeping everything is the identity operation") {
  Matrix m = Matrix::Random(6, 6);
  CHECK((partial_trace(m, {{2, 3}}, {0, 1}) - m).norm() == 0.0);
}

TEST_CASE("partial trace preserves the trace") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = Matrix::Random(12, 12);
    Matrix out = partial_trace(m, {{2, 3, 2}}, {1});
    CHECK(std::abs((out.trace() - m.trace()).real()) < 1e-12);
    CHECK(std::abs((out.trace() - m.trace()).imag()) < 1e-12);
  }
}

TEST_CASE("partial trace agrees with the brute-force oracle") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = Matrix::Random(12, 12);
    Matrix lib = partial_trace(m, {{2, 3, 2}}, {0, 2});
    Matrix oracle = oracles::brute_partial_trace(m, {2, 3, 2}, {0, 2});
    CHECK((lib - oracle).norm() < 1e-13);
  }
}

TEST_CASE("partial trace input validation") {
  Matrix m = Matrix::Identity(6, 6);
  CHECK_THROWS_AS(partial_trace(m, {{2, 2}}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(m, {{2, 3}}, {2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(Matrix::Identity(2, 3), {{2, 3}}, {0}),
                  std::invalid_argument);
}

TEST_CASE("trace norm of Z") { CHECK(trace_norm(pauli_z()) == doctest::Approx(2.0)); }

TEST_CASE("trace norm of the zero matrix") {
  CHECK(trace_norm(Matrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("trace norm of a projector difference") {
  // P_z and P_x projectors; the eigenvalue oracle gives ±sin(π/4).
  Matrix pz = Matrix::Zero(2, 2);
  pz(0, 0) = 1.0;
  Matrix px(2, 2);
  px << 0.5, 0.5, 0.5, 0.5;
  Eigen::Matrix2cd diff = pz - px;
  double oracle = oracles::trace_norm_2x2_hermitian(diff);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(trace_norm(pz - px) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("trace norm triangle inequality and unitary invariance") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = Matrix::Random(4, 4), b = Matrix::Random(4, 4);
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10);
    Matrix u = oracles::random_unitary(rng, 4);
    Matrix v = oracles::random_unitary(rng, 4);
    CHECK(std::abs(trace_norm(u * a * v) - trace_norm(a)) < 1e-10);
  }
}

TEST_CASE("support projector of a full-rank state") {
  Matrix rho = 0.5 * Matrix::Identity(2, 2);
  CHECK((support_projector(rho) - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("support projector fixes projectors") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  CHECK((support_projector(rho) - rho).norm() < 1e-12);
}

TEST_CASE("support projector of a scaled rank-1 state") {
  std::mt19937_64 rng(17);
  Vector v = oracles::random_state(rng, 4);
  Matrix rho = 0.3 * (v * v.adjoint());
  CHECK((support_projector(rho) - v * v.adjoint()).norm() < 1e-10);
}

TEST_CASE("support projector properties") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix g = Matrix::Random(4, 2);
    Matrix rho = g * g.adjoint();  // PSD, rank ≤ 2
    rho /= rho.trace().real();
    Matrix s = support_projector(rho);
    CHECK((s * s - s).norm() < 1e-10);
    CHECK((s - s.adjoint()).norm() < 1e-10);
    CHECK(std::abs(((s * rho).trace() - rho.trace()).real()) < 1e-10);
  }
}

TEST_CASE("support projector rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  CHECK_THROWS_AS(support_projector(m), std::invalid_argument);
}

TEST_CASE("isometry check on the identity") {
  IsometryCheck c = check_isometry(Matrix::Identity(4, 4));
  CHECK(c.residual == 0.0);
  CHECK(c.ok);
}

TEST_CASE("isometry check on unitary columns") {
  std::mt19937_64 rng(23);
  Matrix u = oracles::random_isometry(rng, 4, 2);
  IsometryCheck c = check_isometry(u);
  CHECK(c.residual < 1e-12);
  CHECK(c.ok);
}

TEST_CASE("isometry check on the all-ones matrix") {
  Matrix ones = Matrix::Ones(2, 2);
  IsometryCheck c = check_isometry(ones);
  CHECK(c.residual >= 1.0);  // U†U = 2·(all-ones)
  CHECK(!c.ok);
}

TEST_CASE("permute systems round trip") {
  std::mt19937_64 rng(29);
  Vector v = oracles::random_state(rng, 24);
  RegisterShape shape{{2, 3, 4}};
  Vector p = permute_systems(v, shape, {2, 0, 1});
  RegisterShape pshape{{4, 2, 3}};
  Vector back = permute_systems(p, pshape, {1, 2, 0});
  CHECK((back - v).norm() == 0.0);
}

TEST_CASE("permute systems matches tensor reordering") {
  std::mt19937_64 rng(31);
  Vector a = oracles::random_state(rng, 2);
  Vector b = oracles::random_state(rng, 3);
  Matrix am = a, bm = b;
  Vector ab = vec_of_mat(tensor(am, bm));
  Vector ba = vec_of_mat(tensor(bm, am));
  CHECK((permute_systems(ab, {{2, 3}}, {1, 0}) - ba).norm() == 0.0);
}

TEST_CASE("apply_to_leading and apply_to_trailing match explicit tensors") {
  std::mt19937_64 rng(37);
  Vector v = oracles::random_state(rng, 12);
  Matrix op = oracles::random_unitary(rng, 3);
  {
    Vector lib = apply_to_leading(op, v, 4);
    Vector ref = tensor(op, Matrix::Identity(4, 4)) * v;
    CHECK((lib - ref).norm() < 1e-14);
  }
  {
    Vector lib = apply_to_trailing(op, v, 4);
    Vector ref = tensor(Matrix::Identity(4, 4), op) * v;
    CHECK((lib - ref).norm() < 1e-14);
  }
}

TEST_CASE("dimension cap default and override") {
  CHECK(dimension_cap() == 64);
  setenv("QPVLAB_DIM_CAP", "8", 1);
  CHECK(dimension_cap() == 8);
  setenv("QPVLAB_DIM_CAP", "junk", 1);
  CHECK_THROWS_AS(dimension_cap(), std::invalid_argument);
  unsetenv("QPVLAB_DIM_CAP");
  CHECK(dimension_cap() == 64);
}

TEST_CASE("dimension cap override constrains instance construction") {
  setenv("QPVLAB_DIM_CAP", "2", 1);
  std::mt19937_64 rng(41);
  Matrix u = oracles::random_isometry(rng, 8, 4);  // W dim 2, V1 4, V2 2
  qpv::HiddenInstance inst;
  inst.u = u;
  inst.w_dim = 2;
  inst.v1_dim = 4;
  inst.v2_dim = 2;
  inst.w = oracles::random_state(rng, 2);
  inst.p = qpv::QubitProjector::from_bloch({0, 0, 1});
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  unsetenv("QPVLAB_DIM_CAP");
  CHECK_NOTHROW(inst.validate());
}
