#include "qpv/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qpv {

void ProtocolConfig::validate() const {
  if (!(d > 0.0)) throw std::invalid_argument("verifier half-distance d must be positive");
  if (!(h > 0.0 && h < d)) throw std::invalid_argument("adversary half-distance h must satisfy 0 < h < d");
  if (!(c_light > 0.0)) throw std::invalid_argument("speed of light must be positive");
  if (basis_set.empty()) throw std::invalid_argument("basis set must be nonempty");
  for (std::size_t i = 0; i < basis_set.size(); ++i)
    for (std::size_t j = i + 1; j < basis_set.size(); ++j)
      if (trace_distance(basis_set[i], basis_set[j]) <= 1e-9)
        throw std::invalid_argument("basis set contains duplicate projectors");
}

bool timeline_causal(const std::vector<TimedEvent>& events, double c_light,
                     double rel_tol) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      if (events[i].message_id < 0 || events[i].message_id != events[j].message_id)
        continue;
      double dt = std::abs(events[j].time - events[i].time);
      double dx = std::abs(events[j].position - events[i].position);
      if (dx > c_light * dt * (1.0 + rel_tol) + rel_tol) return false;
    }
  }
  return true;
}

RunReport run_honest(const ProtocolConfig& config, const QubitProjector& p,
                     int z, std::uint64_t seed) {
  config.validate();
  if (z != 0 && z != 1) throw std::invalid_argument("z must be 0 or 1");
  bool found = false;
  for (const QubitProjector& t : config.basis_set)
    if (trace_distance(t, p) <= 1e-9) found = true;
  if (!found) throw std::invalid_argument("projector is not in the configured basis set");

  const double t_mid = config.d / config.c_light;
  const double t_end = 2.0 * config.d / config.c_light;

  // Born sampling; the encoded state is an eigenstate of the measurement,
  // so the draw is deterministic.
  Eigen::Vector2cd v(p.x, p.y);
  Eigen::Vector2cd encoded = (z == 0) ? v : Eigen::Vector2cd(p.perp_statevec());
  double prob_outcome0 = std::norm(v.dot(encoded));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int outcome = (unit(rng) < prob_outcome0) ? 0 : 1;

  RunReport report;
  report.z = z;
  report.z1 = outcome;
  report.z2 = outcome;
  report.accepted = (report.z == report.z1 && report.z == report.z2);
  report.events = {
      {0.0, -config.d, "V1", "send basis", 0},
      {0.0, config.d, "V2", "prepare and send qubit", 1},
      {t_mid, 0.0, "P", "receive basis", 0},
      {t_mid, 0.0, "P", "receive qubit", 1},
      {t_mid, 0.0, "P", "measure outcome " + std::to_string(outcome), -1},
      {t_mid, 0.0, "P", "broadcast result", 2},
      {t_mid, 0.0, "P", "broadcast result", 3},
      {t_end, -config.d, "V1", "receive result", 2},
      {t_end, config.d, "V2", "receive result", 3},
  };
  return report;
}

std::vector<TimedEvent> cheat_timeline(const ProtocolConfig& config) {
  config.validate();
  const double t_act = (config.d - config.h) / config.c_light;
  const double t_own = (config.d + config.h) / config.c_light;
  const double t_end = 2.0 * config.d / config.c_light;
  return {
      {0.0, -config.d, "V1", "send basis", 0},
      {0.0, config.d, "V2", "prepare and send qubit", 1},
      {t_act, -config.h, "A", "receive basis", 0},
      {t_act, -config.h, "A", "apply U_P", -1},
      {t_act, -config.h, "A", "send C", 2},
      {t_act, -config.h, "A", "rebroadcast basis", 4},
      {t_act, config.h, "B", "receive qubit", 1},
      {t_act, config.h, "B", "apply V", -1},
      {t_act, config.h, "B", "send D", 3},
      {t_own, -config.h, "A", "receive D", 3},
      {t_own, -config.h, "A", "measure and broadcast answer", 5},
      {t_own, config.h, "B", "receive C", 2},
      {t_own, config.h, "B", "receive basis", 4},
      {t_own, config.h, "B", "measure and broadcast answer", 6},
      {t_end, -config.d, "V1", "receive result", 5},
      {t_end, config.d, "V2", "receive result", 6},
  };
}

const Matrix& CheatingStrategy::u_for(const QubitProjector& p) const {
  for (const auto& [basis, u] : u_family)
    if (trace_distance(basis, p) <= 1e-9) return u;
  throw std::invalid_argument("strategy has no isometry for projector " +
                              std::to_string(p.bloch.x()) + "," +
                              std::to_string(p.bloch.y()) + "," +
                              std::to_string(p.bloch.z()));
}

const Decoders* CheatingStrategy::decoders_for(const QubitProjector& p) const {
  for (const auto& [basis, dec] : decoders)
    if (trace_distance(basis, p) <= 1e-9) return &dec;
  return nullptr;
}

namespace {

void require_povm_element(const Matrix& m, Eigen::Index dim, const char* name,
                          double tol) {
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument(std::string(name) + " has wrong dimensions");
  Matrix h = 0.5 * (m + m.adjoint());
  if ((m - h).norm() > tol)
    throw std::invalid_argument(std::string(name) + " is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw std::invalid_argument(std::string(name) + " is not positive semidefinite");
}

}  // namespace

void CheatingStrategy::validate(double tol) const {
  if (dim_a <= 0 || dim_b <= 0 || dim_c <= 0 || dim_d <= 0)
    throw std::invalid_argument("register dimensions must be positive");
  Eigen::Index cap = dimension_cap();
  if (dim_a > cap || dim_b > cap || dim_c > cap || dim_d > cap ||
      dim_a * dim_d > cap || dim_b * dim_c > cap || dim_a * dim_b * dim_c > cap)
    throw std::invalid_argument("strategy dimensions exceed cap " + std::to_string(cap));
  if (psi.size() != dim_a * dim_b)
    throw std::invalid_argument("psi must live on A⊗B");
  if (std::abs(psi.norm() - 1.0) > tol)
    throw std::invalid_argument("psi must be a unit vector");
  if (u_family.empty()) throw std::invalid_argument("strategy needs at least one U_P");
  for (const auto& [basis, u] : u_family) {
    (void)basis;
    if (u.rows() != dim_a * dim_c || u.cols() != dim_a)
      throw std::invalid_argument("U_P must map A to A⊗C");
    if (!check_isometry(u, tol).ok) throw std::invalid_argument("U_P is not an isometry");
  }
  if (v.rows() != dim_b * dim_d || v.cols() != dim_b * 2)
    throw std::invalid_argument("V must map B⊗Q to B⊗D");
  if (!check_isometry(v, tol).ok) throw std::invalid_argument("V is not an isometry");
  for (const auto& [basis, dec] : decoders) {
    (void)basis;
    Eigen::Index alice = dim_a * dim_d, bob = dim_b * dim_c;
    require_povm_element(dec.m0, alice, "decoder M0", tol);
    require_povm_element(dec.m1, alice, "decoder M1", tol);
    require_povm_element(dec.n0, bob, "decoder N0", tol);
    require_povm_element(dec.n1, bob, "decoder N1", tol);
    if ((dec.m0 + dec.m1 - Matrix::Identity(alice, alice)).norm() > tol)
      throw std::invalid_argument("Alice's decoder does not sum to identity");
    if ((dec.n0 + dec.n1 - Matrix::Identity(bob, bob)).norm() > tol)
      throw std::invalid_argument("Bob's decoder does not sum to identity");
  }
}

Vector final_cheat_state(const CheatingStrategy& s, const QubitProjector& p,
                         int z) {
  if (z != 0 && z != 1) throw std::invalid_argument("z must be 0 or 1");
  const Matrix& u_p = s.u_for(p);
  Eigen::Vector2cd q = (z == 0) ? Eigen::Vector2cd(p.x, p.y) : p.perp_statevec();

  Vector full(s.psi.size() * 2);  // A⊗B⊗Q
  for (Eigen::Index i = 0; i < s.psi.size(); ++i) {
    full(2 * i) = s.psi(i) * q(0);
    full(2 * i + 1) = s.psi(i) * q(1);
  }
  Vector after_v = apply_to_trailing(s.v, full, s.dim_a);        // A⊗(B⊗D)
  Vector final_state = apply_to_leading(u_p, after_v, s.dim_b * s.dim_d);  // A⊗C⊗B⊗D
  if (std::abs(final_state.norm() - 1.0) > 1e-10)
    throw std::runtime_error("final state norm drifted from 1");
  return final_state;
}

namespace {

RegisterShape acbd_shape(const CheatingStrategy& s) {
  return RegisterShape{{s.dim_a, s.dim_c, s.dim_b, s.dim_d}};
}

// A⊗C⊗B⊗D -> A⊗D⊗B⊗C
const std::vector<int> kToAdBc = {0, 3, 2, 1};

}  // namespace

Matrix final_cheat_density_ad_bc(const CheatingStrategy& s,
                                 const QubitProjector& p, int z) {
  Vector state = permute_systems(final_cheat_state(s, p, z), acbd_shape(s), kToAdBc);
  return state * state.adjoint();
}

namespace {

Matrix positive_part_projector(const Matrix& h) {
  Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  Matrix proj = Matrix::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    if (es.eigenvalues()(k) > 0.0)
      proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return proj;
}

double decoder_value(const Matrix& sigma0, const Matrix& sigma1, const Decoders& dec) {
  double v0 = (tensor(dec.m0, dec.n0) * sigma0).trace().real();
  double v1 = (tensor(dec.m1, dec.n1) * sigma1).trace().real();
  return 0.5 * (v0 + v1);
}

}  // namespace

DecoderResult optimize_decoders(const Matrix& sigma0, const Matrix& sigma1,
                                Eigen::Index dim_alice, Eigen::Index dim_bob,
                                int rounds) {
  if (sigma0.rows() != dim_alice * dim_bob || sigma0.rows() != sigma0.cols() ||
      sigma1.rows() != sigma0.rows() || sigma1.cols() != sigma0.cols())
    throw std::invalid_argument("optimize_decoders: dimension mismatch");
  RegisterShape cut{{dim_alice, dim_bob}};

  DecoderResult res;
  Decoders& dec = res.decoders;
  // Helstrom start for Bob.
  Matrix bob_diff = partial_trace(sigma0, cut, {1}) - partial_trace(sigma1, cut, {1});
  dec.n0 = positive_part_projector(bob_diff);
  dec.n1 = Matrix::Identity(dim_bob, dim_bob) - dec.n0;
  dec.m0 = Matrix::Identity(dim_alice, dim_alice);
  dec.m1 = Matrix::Zero(dim_alice, dim_alice);

  double previous = -1.0;
  for (int round = 0; round < rounds; ++round) {
    // Alice's exact best response: positive part of the effective
    // operator difference under Bob's current measurement.
    Matrix e0 = partial_trace(tensor(Matrix::Identity(dim_alice, dim_alice), dec.n0) * sigma0,
                              cut, {0});
    Matrix e1 = partial_trace(tensor(Matrix::Identity(dim_alice, dim_alice), dec.n1) * sigma1,
                              cut, {0});
    dec.m0 = positive_part_projector(e0 - e1);
    dec.m1 = Matrix::Identity(dim_alice, dim_alice) - dec.m0;

    // Bob's exact best response.
    Matrix f0 = partial_trace(tensor(dec.m0, Matrix::Identity(dim_bob, dim_bob)) * sigma0,
                              cut, {1});
    Matrix f1 = partial_trace(tensor(dec.m1, Matrix::Identity(dim_bob, dim_bob)) * sigma1,
                              cut, {1});
    dec.n0 = positive_part_projector(f0 - f1);
    dec.n1 = Matrix::Identity(dim_bob, dim_bob) - dec.n0;

    double value = decoder_value(sigma0, sigma1, dec);
    res.round_values.push_back(value);
    if (value - previous < 1e-12 && round > 0) break;
    previous = value;
  }
  res.probability = res.round_values.empty() ? decoder_value(sigma0, sigma1, dec)
                                             : res.round_values.back();
  return res;
}

double acceptance_probability_given_z(const CheatingStrategy& s,
                                      const QubitProjector& p, int z,
                                      const Decoders& dec) {
  Matrix sigma = final_cheat_density_ad_bc(s, p, z);
  const Matrix& alice = (z == 0) ? dec.m0 : dec.m1;
  const Matrix& bob = (z == 0) ? dec.n0 : dec.n1;
  return (tensor(alice, bob) * sigma).trace().real();
}

double acceptance_probability(const CheatingStrategy& s,
                              const QubitProjector& p, const Decoders& dec) {
  return 0.5 * (acceptance_probability_given_z(s, p, 0, dec) +
                acceptance_probability_given_z(s, p, 1, dec));
}

CheatAssessment assess_strategy(const ProtocolConfig& config,
                                const CheatingStrategy& s, double tol,
                                int decoder_rounds) {
  config.validate();
  s.validate();
  CheatAssessment out;
  out.is_perfect = true;
  RegisterShape cut{{s.dim_a * s.dim_d, s.dim_b * s.dim_c}};
  for (const QubitProjector& p : config.basis_set) {
    Matrix sigma0 = final_cheat_density_ad_bc(s, p, 0);
    Matrix sigma1 = final_cheat_density_ad_bc(s, p, 1);
    BasisAssessment ba;
    ba.basis = p;
    ba.dist_ad = 0.5 * trace_norm(partial_trace(sigma0, cut, {0}) -
                                  partial_trace(sigma1, cut, {0}));
    ba.dist_bc = 0.5 * trace_norm(partial_trace(sigma0, cut, {1}) -
                                  partial_trace(sigma1, cut, {1}));
    const Decoders* dec = s.decoders_for(p);
    Decoders optimized;
    if (!dec) {
      optimized = optimize_decoders(sigma0, sigma1, s.dim_a * s.dim_d,
                                    s.dim_b * s.dim_c, decoder_rounds)
                      .decoders;
      dec = &optimized;
    }
    ba.accept_given_z0 = acceptance_probability_given_z(s, p, 0, *dec);
    ba.accept_given_z1 = acceptance_probability_given_z(s, p, 1, *dec);
    ba.acceptance_probability = 0.5 * (ba.accept_given_z0 + ba.accept_given_z1);
    if (!(ba.dist_ad > 1.0 - tol && ba.dist_bc > 1.0 - tol)) out.is_perfect = false;
    out.per_basis.push_back(std::move(ba));
  }
  return out;
}

namespace {

// Bell basis on B1⊗Q, fixed ordering.
std::array<Eigen::Vector4cd, 4> bell_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Vector4cd, 4> phi;
  phi[0] << s, 0, 0, s;    // (|00⟩ + |11⟩)/√2
  phi[1] << s, 0, 0, -s;   // (|00⟩ − |11⟩)/√2
  phi[2] << 0, s, s, 0;    // (|01⟩ + |10⟩)/√2
  phi[3] << 0, s, -s, 0;   // (|01⟩ − |10⟩)/√2
  return phi;
}

// Whether the teleportation byproduct for Bell outcome k flips the bit
// encoded in the basis of p. Determined from the collapsed EPR half:
// t_k = (I ⊗ ⟨φ_k|)(φ+ ⊗ v_p) is proportional to v_p (no flip) or to its
// complement (flip); the two cases are exactly |⟨v_p, t_k⟩| = 1/2 and 0.
std::array<int, 4> flip_table(const QubitProjector& p) {
  auto phi = bell_basis();
  Eigen::Vector2cd v(p.x, p.y);
  std::array<int, 4> flips{};
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector2cd t = Eigen::Vector2cd::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 2; ++i)
      for (int q = 0; q < 2; ++q) t(i) += s * std::conj(phi[k](i * 2 + q)) * v(q);
    flips[k] = (std::abs(v.dot(t)) < 0.25) ? 1 : 0;
  }
  return flips;
}

}  // namespace

CheatingStrategy bb84_attack() {
  CheatingStrategy s;
  s.dim_a = 4;  // EPR half ⊗ outcome scratch
  s.dim_b = 4;  // kept Bell outcome (initially EPR half ⊗ scratch)
  s.dim_c = 4;  // basis label ⊗ outcome, sent to Bob
  s.dim_d = 4;  // Bell outcome, sent to Alice

  std::vector<QubitProjector> bases = {
      QubitProjector::from_bloch({0.0, 0.0, 1.0}),
      QubitProjector::from_bloch({1.0, 0.0, 0.0}),
  };

  // ψ: EPR pair between A1 and B1, both scratch qubits at |0⟩.
  const double isq = 1.0 / std::sqrt(2.0);
  s.psi = Vector::Zero(16);
  for (int j = 0; j < 2; ++j) {
    Eigen::Index a = j * 2;  // (A1=j, A2=0)
    Eigen::Index b = j * 2;  // (B1=j, B2=0)
    s.psi(a * 4 + b) = isq;
  }

  // V: coherent Bell measurement of (B1, Q); the outcome index lands in
  // both the B register and D. Columns with B2=1 complete the isometry on
  // a D-shifted diagonal.
  auto phi = bell_basis();
  s.v = Matrix::Zero(16, 8);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      for (int q = 0; q < 2; ++q) {
        Eigen::Index col = (b1 * 2 + b2) * 2 + q;
        for (int k = 0; k < 4; ++k) {
          Complex amp = std::conj(phi[k](b1 * 2 + q));
          Eigen::Index d = (k + b2) % 4;
          s.v(k * 4 + d, col) += amp;
        }
      }
    }
  }

  // U_P: deferred {P, I−P} measurement of A1; A2 records the outcome and C
  // carries (basis label, outcome). A2=1 columns complete the isometry
  // with a mismatched C outcome bit.
  for (int bl = 0; bl < 2; ++bl) {
    const QubitProjector& p = bases[bl];
    Eigen::Matrix2cd proj[2] = {p.matrix(), p.complement()};
    Matrix u = Matrix::Zero(16, 4);
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        Eigen::Index col = a1 * 2 + a2;
        for (int a = 0; a < 2; ++a) {
          int c_out = bl * 2 + ((a + a2) % 2);
          for (int i = 0; i < 2; ++i) {
            Complex amp = proj[a](i, a1);
            u((i * 2 + a) * 4 + c_out, col) += amp;
          }
        }
      }
    }
    s.u_family.emplace_back(p, std::move(u));
  }

  // Decoders: both sides recover z = outcome ⊕ flip(k).
  for (int bl = 0; bl < 2; ++bl) {
    const QubitProjector& p = bases[bl];
    auto flips = flip_table(p);
    Decoders dec;
    dec.m0 = Matrix::Zero(16, 16);
    dec.n0 = Matrix::Zero(16, 16);
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int k = 0; k < 4; ++k)
          if ((a2 + flips[k]) % 2 == 0) {
            Eigen::Index idx = (a1 * 2 + a2) * 4 + k;  // (A1, A2) ⊗ D
            dec.m0(idx, idx) = 1.0;
          }
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 4; ++c)
        if ((c % 2 + flips[k]) % 2 == 0) {
          Eigen::Index idx = k * 4 + c;  // B ⊗ C
          dec.n0(idx, idx) = 1.0;
        }
    dec.m1 = Matrix::Identity(16, 16) - dec.m0;
    dec.n1 = Matrix::Identity(16, 16) - dec.n0;
    s.decoders.emplace_back(p, std::move(dec));
  }
  return s;
}

CheatingStrategy do_nothing_strategy(const std::vector<QubitProjector>& basis_set) {
  CheatingStrategy s;
  s.dim_a = 1;
  s.dim_b = 4;  // stale slot ⊗ parked qubit
  s.dim_c = 1;
  s.dim_d = 2;
  s.psi = Vector::Zero(4);
  s.psi(0) = 1.0;
  // Swap Q into B's second slot and emit the stale slot into D.
  s.v = Matrix::Zero(8, 8);
  for (int b0 = 0; b0 < 2; ++b0)
    for (int slot = 0; slot < 2; ++slot)
      for (int q = 0; q < 2; ++q)
        s.v((b0 * 2 + q) * 2 + slot, (b0 * 2 + slot) * 2 + q) = 1.0;
  for (const QubitProjector& p : basis_set)
    s.u_family.emplace_back(p, Matrix::Identity(1, 1));
  return s;
}

CheatingStrategy measure_and_broadcast(const QubitProjector& p) {
  return measure_and_broadcast(p, 1, 2, 1, 2);
}

CheatingStrategy measure_and_broadcast(const QubitProjector& p,
                                       Eigen::Index dim_a, Eigen::Index dim_b,
                                       Eigen::Index dim_c, Eigen::Index dim_d) {
  if (dim_a < 1 || dim_b < 2 || dim_c < 1 || dim_d < 2)
    throw std::invalid_argument("measure_and_broadcast needs dims at least (1,2,1,2)");
  CheatingStrategy s;
  s.dim_a = dim_a;
  s.dim_b = dim_b;
  s.dim_c = dim_c;
  s.dim_d = dim_d;
  s.psi = Vector::Zero(dim_a * dim_b);
  s.psi(0) = 1.0;

  Matrix u = Matrix::Zero(dim_a * dim_c, dim_a);
  for (Eigen::Index a = 0; a < dim_a; ++a) u(a * dim_c, a) = 1.0;
  for (const QubitProjector& basis : {p}) s.u_family.emplace_back(basis, u);

  // Deferred {P, I−P} measurement of Q: the outcome bit is written to both
  // B and D. Columns with B ≥ 2 park the qubit in D unchanged.
  Eigen::Vector2cd v(p.x, p.y);
  Eigen::Vector2cd vp = p.perp_statevec();
  s.v = Matrix::Zero(dim_b * dim_d, dim_b * 2);
  auto out_index = [&](Eigen::Index b, Eigen::Index d) { return b * dim_d + d; };
  for (Eigen::Index b = 0; b < dim_b; ++b) {
    for (int q = 0; q < 2; ++q) {
      Eigen::Index col = b * 2 + q;
      if (b < 2) {
        // images: (b, v) -> (b xor 0 stays, outcome 0), (b, v⊥) -> outcome 1
        Eigen::Index img_v = (b == 0) ? out_index(0, 0) : out_index(0, 1);
        Eigen::Index img_vp = (b == 0) ? out_index(1, 1) : out_index(1, 0);
        s.v(img_v, col) += std::conj(v(q));
        s.v(img_vp, col) += std::conj(vp(q));
      } else {
        s.v(out_index(b, q), col) = 1.0;
      }
    }
  }

  Decoders dec;
  Eigen::Index alice = dim_a * dim_d, bob = dim_b * dim_c;
  dec.m0 = Matrix::Zero(alice, alice);
  for (Eigen::Index a = 0; a < dim_a; ++a) {
    Eigen::Index idx = a * dim_d + 0;
    dec.m0(idx, idx) = 1.0;
  }
  dec.m1 = Matrix::Identity(alice, alice) - dec.m0;
  dec.n0 = Matrix::Zero(bob, bob);
  for (Eigen::Index c = 0; c < dim_c; ++c) {
    Eigen::Index idx = 0 * dim_c + c;
    dec.n0(idx, idx) = 1.0;
  }
  dec.n1 = Matrix::Identity(bob, bob) - dec.n0;
  s.decoders.emplace_back(p, std::move(dec));
  return s;
}

InducedChannel induced_channel(const CheatingStrategy& s) {
  Eigen::Index ac = s.dim_a * s.dim_c;
  Matrix lifted = tensor(Matrix::Identity(ac, ac), s.v);  // A⊗C⊗B⊗Q -> A⊗C⊗B⊗D
  RegisterShape out_shape{{s.dim_a, s.dim_c, s.dim_b, s.dim_d}};
  InducedChannel ch;
  ch.w_dim = s.dim_a * s.dim_c * s.dim_b;
  ch.v1_dim = s.dim_a * s.dim_d;
  ch.v2_dim = s.dim_b * s.dim_c;
  ch.u = Matrix(lifted.rows(), lifted.cols());
  for (Eigen::Index col = 0; col < lifted.cols(); ++col)
    ch.u.col(col) = permute_systems(Vector(lifted.col(col)), out_shape, kToAdBc);
  return ch;
}

Vector induced_direction(const CheatingStrategy& s, const QubitProjector& p) {
  return apply_to_leading(s.u_for(p), s.psi, s.dim_b);  // (A⊗C)⊗B
}

}  // namespace qpv
