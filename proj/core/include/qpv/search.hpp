#pragma once

#include <cstdint>
#include <vector>

#include "qpv/hidden.hpp"
#include "qpv/protocol.hpp"

namespace qpv {

struct SearchDims {
  Eigen::Index a = 1, b = 2, c = 1, d = 2;
};

/// Flat real parameter vector encoding a strategy: ψ as unnormalized
/// complex entries, then one Hermitian generator per U_P and one for V.
/// Isometries are the leading columns of exp(iH), so any finite vector
/// decodes to a valid strategy.
struct StrategyParams {
  std::vector<double> values;
};

std::size_t param_count(const SearchDims& dims, std::size_t basis_count);
CheatingStrategy decode_params(const StrategyParams& params,
                               const SearchDims& dims,
                               const std::vector<QubitProjector>& basis_set);
StrategyParams encode_strategy(const CheatingStrategy& s,
                               const std::vector<QubitProjector>& basis_set);

struct SearchConfig {
  std::vector<QubitProjector> basis_set;
  SearchDims dims;
  int restarts = 8;
  int max_iters = 40;
  std::uint64_t seed = 0;
  double step_tol = 1e-9;
  double value_tol = 1e-12;
  int decoder_rounds = 30;
  double fd_step = 1e-6;
  /// Warm starts consumed by the first restarts, before any random
  /// initialization; vectors must match param_count for (dims, basis_set).
  /// A perfect injected strategy short-circuits the remaining restarts.
  std::vector<StrategyParams> injected;
  /// When true, one extra warm start from measure_and_broadcast
  /// (basis_set[0]) embedded into dims follows the injected vectors.
  bool warm_start_single_basis = true;

  /// Every violated constraint, empty when the config is valid.
  std::vector<std::string> problems() const;
  /// Throws std::invalid_argument listing all problems at once.
  void validate() const;
};

struct RestartTrace {
  std::uint64_t derived_seed = 0;
  double value = 0.0;
};

struct SearchResult {
  StrategyParams best;
  double best_worst_case = 0.0;  // min over P of optimized acceptance
  std::vector<RestartTrace> per_restart;
  bool certified_perfect = false;  // best_worst_case ≥ 1 − 1e−6
};

/// Multi-restart finite-difference ascent of
///   f(params) = min over P in T of the seesaw-optimized acceptance.
/// Deterministic given the config (restart i uses a seed derived from
/// config.seed and i). progress, when non-null, receives one
/// "restart <i> value <v>" line per restart.
SearchResult search_cheating(const SearchConfig& config,
                             std::ostream* progress = nullptr);

struct HiddenPair {
  Eigen::Vector3d c;
  Vector w;        // gauge fixed: largest-magnitude entry real nonnegative
  double residual; // hidden_set_residual at (c, w)
};

/// Levenberg-Marquardt minimization of the membership residual from
/// `attempts` random starts. Returns only points certified below
/// kMembershipTol, re-evaluated in a fresh context, deduplicated.
std::vector<HiddenPair> find_hidden_pairs(const Matrix& u, Eigen::Index w_dim,
                                          Eigen::Index v1_dim,
                                          Eigen::Index v2_dim, int attempts,
                                          std::uint64_t seed);

struct PairMargin {
  int i = 0, j = 0;
  double theta = 0.0;
  double input_distance = 0.0;  // ‖v − w‖ over W
  double bound = 0.0;           // separation_lower_bound(theta)
  double margin = 0.0;          // input_distance − bound
  bool violation = false;       // margin < −1e−6
};

struct ScanReport {
  std::vector<PairMargin> pairs;
  int violations = 0;
};

/// Checks every unordered pair of certified hidden pairs of one channel
/// against the separation bound. Each pair is re-certified against u
/// first; a pair from a different channel fails certification and throws.
ScanReport separation_scan(const Matrix& u, Eigen::Index w_dim,
                           Eigen::Index v1_dim, Eigen::Index v2_dim,
                           const std::vector<HiddenPair>& pairs);

/// Number of projector clusters at the given trace-distance tolerance.
int distinct_basis_census(const std::vector<HiddenPair>& pairs,
                          double cluster_tol = 1e-4);

/// Deterministic per-restart seed derivation (splitmix-style).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qpv
