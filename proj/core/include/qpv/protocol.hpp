#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpv/bloch.hpp"
#include "qpv/hidden.hpp"
#include "qpv/linalg.hpp"

namespace qpv {

/// One-dimensional timeline: verifiers at x = ±d, adversaries (when
/// present) at x = ±h. Only the ratios matter, so the defaults use
/// simulator units with c = 1.
struct ProtocolConfig {
  double d = 1.0;
  double h = 0.5;
  double c_light = 1.0;
  std::vector<QubitProjector> basis_set;

  void validate() const;
};

struct TimedEvent {
  double time = 0.0;
  double position = 0.0;
  std::string actor;
  std::string action;
  int message_id = -1;  // pairs a send with its receive; -1 for local acts
};

/// True when every send/receive pair with a shared message_id satisfies
/// |Δx| ≤ c·Δt within the relative tolerance.
bool timeline_causal(const std::vector<TimedEvent>& events, double c_light,
                     double rel_tol = 1e-12);

struct RunReport {
  std::vector<TimedEvent> events;
  int z = 0;
  int z1 = 0;
  int z2 = 0;
  bool accepted = false;
};

/// Two-outcome measurements: Alice's {m0, m1} acts on A⊗D, Bob's
/// {n0, n1} on B⊗C.
struct Decoders {
  Matrix m0, m1, n0, n1;
};

/// Shared state ψ on A⊗B, one isometry U_P : A -> A⊗C per basis element,
/// and Bob's isometry V : B⊗Q -> B⊗D. All mid-protocol measurements are
/// deferred into the isometries.
struct CheatingStrategy {
  Eigen::Index dim_a = 1, dim_b = 1, dim_c = 1, dim_d = 1;
  Vector psi;
  std::vector<std::pair<QubitProjector, Matrix>> u_family;
  Matrix v;
  std::vector<std::pair<QubitProjector, Decoders>> decoders;

  const Matrix& u_for(const QubitProjector& p) const;     // throws if missing
  const Decoders* decoders_for(const QubitProjector& p) const;  // nullptr if missing
  void validate(double tol = kRankTol) const;
};

struct BasisAssessment {
  QubitProjector basis;
  double acceptance_probability = 0.0;
  double accept_given_z0 = 0.0;
  double accept_given_z1 = 0.0;
  double dist_ad = 0.0;
  double dist_bc = 0.0;
};

struct CheatAssessment {
  std::vector<BasisAssessment> per_basis;
  bool is_perfect = false;
};

/// Honest execution: qubit encoding z in the {P, I−P} basis measured by
/// the prover at t = d/c, results received at t = 2d/c. The outcome is
/// sampled through the seeded generator, which for an eigenstate input is
/// deterministic.
RunReport run_honest(const ProtocolConfig& config, const QubitProjector& p,
                     int z, std::uint64_t seed);

/// Adversarial event timeline: U_P and V are applied at t = (d−h)/c and
/// both adversaries hold their final systems at t = (d+h)/c.
std::vector<TimedEvent> cheat_timeline(const ProtocolConfig& config);

/// Final pure state (U_P ⊗ I)(I ⊗ V)(ψ ⊗ q_z), ordered A⊗C⊗B⊗D.
Vector final_cheat_state(const CheatingStrategy& s, const QubitProjector& p,
                         int z);

/// Density of the final state permuted to the (A⊗D)⊗(B⊗C) cut.
Matrix final_cheat_density_ad_bc(const CheatingStrategy& s,
                                 const QubitProjector& p, int z);

/// Per-basis distinguishability on the AD and BC cuts plus acceptance
/// probability (with the shipped decoders when present, otherwise with
/// seesaw-optimized ones). is_perfect iff every basis has both distances
/// above 1 − tol.
CheatAssessment assess_strategy(const ProtocolConfig& config,
                                const CheatingStrategy& s,
                                double tol = kVerdictTol,
                                int decoder_rounds = 50);

/// (1/2) Σ_z Tr[(M_z ⊗ N_z) σ_z] on the (AD | BC) cut: the probability
/// that both verifiers see the right bit under uniform z.
double acceptance_probability(const CheatingStrategy& s,
                              const QubitProjector& p, const Decoders& dec);

/// Conditional acceptance Tr[(M_z ⊗ N_z) σ_z] for one z.
double acceptance_probability_given_z(const CheatingStrategy& s,
                                      const QubitProjector& p, int z,
                                      const Decoders& dec);

struct DecoderResult {
  Decoders decoders;
  double probability = 0.0;
  std::vector<double> round_values;  // nondecreasing
};

/// Alternating exact maximization of the acceptance probability over
/// Alice's and Bob's two-outcome measurements. Fixing one side, the other
/// side's optimum is the projector onto the positive eigenspace of the
/// effective operator difference. sigma0/sigma1 are densities on
/// (alice ⊗ bob), with dim_alice * dim_bob matching their size.
DecoderResult optimize_decoders(const Matrix& sigma0, const Matrix& sigma1,
                                Eigen::Index dim_alice, Eigen::Index dim_bob,
                                int rounds);

/// The EPR-pair attack on T = {Z-eigenstate, X-eigenstate}: Bob defers a
/// Bell measurement of his EPR half with Q into V (D carries the 2-bit
/// outcome), Alice defers her {P, I−P} measurement into U_P (C carries
/// the basis label and outcome); the shipped decoders apply the classical
/// correction. dims (4, 4, 4, 4).
CheatingStrategy bb84_attack();

/// Parks the incoming qubit inside B and hands Alice a constant register:
/// her side carries no information about z. dims (1, 4, 1, 2).
CheatingStrategy do_nothing_strategy(const std::vector<QubitProjector>& basis_set);

/// Single-basis strategy: Bob measures Q in {P, I−P} (deferred into V),
/// keeps one copy of the bit and sends the other to Alice. Perfect for
/// the singleton set {P}. dims (1, 2, 1, 2), embeddable into larger dims.
CheatingStrategy measure_and_broadcast(const QubitProjector& p);
CheatingStrategy measure_and_broadcast(const QubitProjector& p,
                                       Eigen::Index dim_a, Eigen::Index dim_b,
                                       Eigen::Index dim_c, Eigen::Index dim_d);

/// The channel ρ -> V(ψ_P ⊗ ρ)V* of a strategy, as an isometry
/// W⊗Q -> V1⊗V2 with W = A⊗C⊗B, V1 = A⊗D, V2 = B⊗C.
struct InducedChannel {
  Matrix u;
  Eigen::Index w_dim, v1_dim, v2_dim;
};
InducedChannel induced_channel(const CheatingStrategy& s);

/// ψ_P = (U_P ⊗ I_B) ψ on W = A⊗C⊗B, the direction that pairs with P in
/// the induced channel.
Vector induced_direction(const CheatingStrategy& s, const QubitProjector& p);

}  // namespace qpv
