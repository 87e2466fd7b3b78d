#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qpv/search.hpp"

using namespace qpv;

namespace {

QubitProjector z_basis() { return QubitProjector::from_bloch({0, 0, 1}); }
QubitProjector x_basis() { return QubitProjector::from_bloch({1, 0, 0}); }

SearchConfig tiny_config() {
  SearchConfig config;
  config.basis_set = {z_basis()};
  config.dims = {1, 2, 1, 2};
  config.restarts = 2;
  config.max_iters = 3;
  config.seed = 7;
  return config;
}

}  // namespace

TEST_CASE("decode yields a valid strategy for arbitrary finite parameters") {
  SearchDims dims{2, 2, 2, 2};
  std::vector<QubitProjector> basis = {z_basis(), x_basis()};
  StrategyParams params;
  params.values.assign(param_count(dims, basis.size()), 0.0);
  CheatingStrategy s = decode_params(params, dims, basis);
  s.validate();  // all-zero parameters still decode to isometries

  std::mt19937_64 rng(137);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    for (double& v : params.values) v = gauss(rng);
    decode_params(params, dims, basis).validate();
  }
}

TEST_CASE("decode rejects wrong-length and non-finite parameters") {
  SearchDims dims{1, 2, 1, 2};
  std::vector<QubitProjector> basis = {z_basis()};
  StrategyParams params;
  params.values.assign(param_count(dims, basis.size()) + 1, 0.0);
  CHECK_THROWS_AS(decode_params(params, dims, basis), std::invalid_argument);
  params.values.assign(param_count(dims, basis.size()), 0.0);
  params.values[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(decode_params(params, dims, basis), std::invalid_argument);
}

TEST_CASE("encode then decode reproduces the attack") {
  CheatingStrategy attack = bb84_attack();
  std::vector<QubitProjector> basis;
  for (const auto& [p, u] : attack.u_family) {
    (void)u;
    basis.push_back(p);
  }
  StrategyParams params = encode_strategy(attack, basis);
  CheatingStrategy decoded =
      decode_params(params, {attack.dim_a, attack.dim_b, attack.dim_c, attack.dim_d},
                    basis);
  decoded.validate();
  CHECK((decoded.psi - attack.psi).norm() < 1e-12);
  CHECK((decoded.v - attack.v).norm() < 1e-10);
  for (std::size_t i = 0; i < basis.size(); ++i)
    CHECK((decoded.u_family[i].second - attack.u_family[i].second).norm() < 1e-10);
}

TEST_CASE("search on a singleton basis certifies through the warm start") {
  SearchConfig config = tiny_config();
  SearchResult result = search_cheating(config);
  CHECK(result.best_worst_case >= 1.0 - 1e-6);
  CHECK(result.certified_perfect);
}

TEST_CASE("search is deterministic given the seed") {
  SearchConfig config = tiny_config();
  config.warm_start_single_basis = false;
  config.max_iters = 2;
  SearchResult a = search_cheating(config);
  SearchResult b = search_cheating(config);
  REQUIRE(a.per_restart.size() == b.per_restart.size());
  for (std::size_t i = 0; i < a.per_restart.size(); ++i) {
    CHECK(a.per_restart[i].derived_seed == b.per_restart[i].derived_seed);
    CHECK(a.per_restart[i].value == b.per_restart[i].value);
  }
  CHECK(a.best_worst_case == b.best_worst_case);
  CHECK(a.best.values == b.best.values);
}

TEST_CASE("search value is nondecreasing in the restart budget") {
  SearchConfig config = tiny_config();
  config.warm_start_single_basis = false;
  config.max_iters = 1;
  config.restarts = 1;
  double v1 = search_cheating(config).best_worst_case;
  config.restarts = 4;
  double v4 = search_cheating(config).best_worst_case;
  CHECK(v4 >= v1 - 1e-15);
  CHECK(v4 <= 1.0 + 1e-12);
  CHECK(v1 <= 1.0 + 1e-12);
}

TEST_CASE("search config validation") {
  SearchConfig config = tiny_config();
  config.restarts = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = tiny_config();
  config.dims = {16, 16, 16, 2};  // a·b·c over the cap
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = tiny_config();
  config.injected.push_back(StrategyParams{{1.0, 2.0}});
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("derived seeds differ across restarts and stay stable") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
  CHECK(derive_seed(5, 3) != derive_seed(6, 3));
}

TEST_CASE("hidden-pair search on the Z-basis copy channel finds both poles") {
  Matrix u = copy_isometry(z_basis());
  std::vector<HiddenPair> pairs = find_hidden_pairs(u, 1, 2, 2, 24, 11);
  REQUIRE(!pairs.empty());
  bool found_north = false, found_south = false;
  for (const HiddenPair& hp : pairs) {
    CHECK(hp.residual < kMembershipTol);
    if ((hp.c - Eigen::Vector3d(0, 0, 1)).norm() < 1e-6) found_north = true;
    if ((hp.c - Eigen::Vector3d(0, 0, -1)).norm() < 1e-6) found_south = true;
  }
  CHECK(found_north);
  CHECK(found_south);
  CHECK(distinct_basis_census(pairs) == 2);
}

TEST_CASE("hidden-pair search on the attack channel recovers the design bases") {
  CheatingStrategy attack = bb84_attack();
  InducedChannel ch = induced_channel(attack);
  std::vector<HiddenPair> pairs =
      find_hidden_pairs(ch.u, ch.w_dim, ch.v1_dim, ch.v2_dim, 24, 5);
  bool found_z = false, found_x = false;
  for (const HiddenPair& hp : pairs) {
    if ((hp.c - Eigen::Vector3d(0, 0, 1)).norm() < 1e-6) found_z = true;
    if ((hp.c - Eigen::Vector3d(1, 0, 0)).norm() < 1e-6) found_x = true;
  }
  CHECK(found_z);
  CHECK(found_x);
}

TEST_CASE("hidden-pair search returns no false positives") {
  std::mt19937_64 rng(139);
  Matrix u = oracles::random_isometry(rng, 8, 4);  // generic channel, W dim 2
  std::vector<HiddenPair> pairs = find_hidden_pairs(u, 2, 4, 2, 6, 3);
  for (const HiddenPair& hp : pairs) {
    double fresh = hidden_set_residual(u, 2, 4, 2, hp.c, hp.w);
    CHECK(fresh < kMembershipTol);
  }
}

TEST_CASE("hidden-pair search is deterministic") {
  Matrix u = copy_isometry(z_basis());
  std::vector<HiddenPair> a = find_hidden_pairs(u, 1, 2, 2, 10, 5);
  std::vector<HiddenPair> b = find_hidden_pairs(u, 1, 2, 2, 10, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i].c - b[i].c).norm() == 0.0);
    CHECK((a[i].w - b[i].w).norm() == 0.0);
  }
}

TEST_CASE("separation scan on planted attack pairs") {
  CheatingStrategy attack = bb84_attack();
  InducedChannel ch = induced_channel(attack);
  std::vector<HiddenPair> pairs;
  for (const auto& [basis, u] : attack.u_family) {
    (void)u;
    Vector w = induced_direction(attack, basis);
    double res = hidden_set_residual(ch.u, ch.w_dim, ch.v1_dim, ch.v2_dim,
                                     basis.bloch, w);
    REQUIRE(res < kMembershipTol);
    pairs.push_back({basis.bloch, w, res});
  }
  ScanReport report = separation_scan(ch.u, ch.w_dim, ch.v1_dim, ch.v2_dim, pairs);
  REQUIRE(report.pairs.size() == 1);
  CHECK(report.violations == 0);
  CHECK(report.pairs[0].theta == doctest::Approx(M_PI / 4).epsilon(1e-9));
  CHECK(report.pairs[0].bound == doctest::Approx(0.33820).epsilon(1e-3));
  CHECK(report.pairs[0].margin >= -1e-6);
  CHECK(distinct_basis_census(pairs) == 2);
}

TEST_CASE("separation scan never flags pairs at angle zero") {
  Matrix u = copy_isometry(z_basis());
  Vector w1(1), w2(1);
  w1(0) = 1.0;
  w2(0) = Complex(0, 1);  // same projector, different phase direction
  std::vector<HiddenPair> pairs = {
      {{0, 0, 1}, w1, hidden_set_residual(u, 1, 2, 2, {0, 0, 1}, w1)},
      {{0, 0, 1}, w2, hidden_set_residual(u, 1, 2, 2, {0, 0, 1}, w2)},
  };
  ScanReport report = separation_scan(u, 1, 2, 2, pairs);
  CHECK(report.violations == 0);
  CHECK(report.pairs[0].bound == 0.0);
}

TEST_CASE("separation scan accepts empty input") {
  Matrix u = copy_isometry(z_basis());
  ScanReport report = separation_scan(u, 1, 2, 2, {});
  CHECK(report.pairs.empty());
  CHECK(report.violations == 0);
}

TEST_CASE("separation scan rejects pairs from a different channel") {
  Matrix u = copy_isometry(z_basis());
  Matrix u2 = copy_isometry(x_basis());
  Vector w(1);
  w(0) = 1.0;
  std::vector<HiddenPair> pairs = {
      {{1, 0, 0}, w, hidden_set_residual(u2, 1, 2, 2, {1, 0, 0}, w)}};
  CHECK_THROWS_AS(separation_scan(u, 1, 2, 2, pairs), std::invalid_argument);
}

TEST_CASE("census clusters nearby projectors") {
  Vector w(1);
  w(0) = 1.0;
  std::vector<HiddenPair> pairs = {
      {{0, 0, 1}, w, 0.0},
      {{0, 0, 1 + 1e-7}, w, 0.0},
      {{0, 0, -1}, w, 0.0},
  };
  CHECK(distinct_basis_census(pairs) == 2);
}
