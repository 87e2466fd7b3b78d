#include <doctest.h>

#include <random>
#include <string>

#include "oracles.hpp"
#include "qpv/io.hpp"

using namespace qpv;

TEST_CASE("matrix literal round trip") {
  std::mt19937_64 rng(149);
  Matrix m = oracles::random_isometry(rng, 4, 2);
  Matrix back = matrix_from_json(matrix_to_json(m));
  CHECK((back - m).norm() == 0.0);  // shortest round-trip printing is exact
}

TEST_CASE("matrix literal validation names the problem") {
  CHECK_THROWS_WITH_AS(matrix_from_json("{\"rows\": 2, \"cols\": 2}"),
                       doctest::Contains("entries"), std::runtime_error);
  CHECK_THROWS_AS(matrix_from_json("{\"rows\": 2, \"cols\": 2, \"entries\": [[1,0]]}"),
                  std::runtime_error);
  CHECK_THROWS_AS(matrix_from_json("not json"), std::runtime_error);
}

TEST_CASE("projector syntax parses both forms") {
  QubitProjector a = parse_projector("bloch:0,0,1");
  CHECK((a.matrix() - QubitProjector::from_bloch({0, 0, 1}).matrix()).norm() < 1e-12);

  double s = 1.0 / std::sqrt(2.0);
  QubitProjector b = parse_projector("vec:" + std::to_string(s) + ",0," +
                                     std::to_string(s) + ",0");
  CHECK((b.matrix() - QubitProjector::from_bloch({1, 0, 0}).matrix()).norm() < 1e-12);

  CHECK_THROWS_AS(parse_projector("polar:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_projector("bloch:1,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_projector("bloch:a,b,c"), std::invalid_argument);
}

TEST_CASE("projector formatting round trips") {
  std::mt19937_64 rng(151);
  for (int trial = 0; trial < 20; ++trial) {
    QubitProjector p = QubitProjector::from_bloch(oracles::random_bloch(rng));
    QubitProjector back = parse_projector(format_projector(p));
    CHECK(trace_distance(p, back) < 1e-12);
  }
}

TEST_CASE("instance file round trip") {
  std::mt19937_64 rng(157);
  HiddenInstance inst;
  inst.u = oracles::random_isometry(rng, 8, 4);
  inst.w_dim = 2;
  inst.v1_dim = 4;
  inst.v2_dim = 2;
  inst.w = oracles::random_state(rng, 2);
  inst.p = QubitProjector::from_bloch(oracles::random_bloch(rng));
  inst.validate();

  HiddenInstance back = instance_from_json(instance_to_json(inst));
  CHECK((back.u - inst.u).norm() == 0.0);
  CHECK((back.w - inst.w).norm() == 0.0);
  CHECK(trace_distance(back.p, inst.p) < 1e-12);
}

TEST_CASE("instance errors name the offending key") {
  CHECK_THROWS_WITH_AS(instance_from_json("{}"), doctest::Contains("'U'"),
                       std::runtime_error);
  std::string no_w = R"({"U": {"rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]},
                         "w_dim":1, "v1_dim":2, "v2_dim":1, "P":"bloch:0,0,1"})";
  CHECK_THROWS_WITH_AS(instance_from_json(no_w), doctest::Contains("'w'"),
                       std::runtime_error);
  CHECK_THROWS_AS(instance_from_json("{\"U\": 3}"), std::runtime_error);
  CHECK_THROWS_AS(instance_from_json("{truncated"), std::runtime_error);
}

TEST_CASE("strategy file round trip preserves the attack") {
  CheatingStrategy attack = bb84_attack();
  CheatingStrategy back = strategy_from_json(strategy_to_json(attack));
  CHECK(back.dim_a == attack.dim_a);
  CHECK(back.dim_d == attack.dim_d);
  CHECK((back.psi - attack.psi).norm() == 0.0);
  CHECK((back.v - attack.v).norm() == 0.0);
  REQUIRE(back.u_family.size() == attack.u_family.size());
  REQUIRE(back.decoders.size() == attack.decoders.size());
  for (std::size_t i = 0; i < attack.u_family.size(); ++i) {
    const Matrix& u = back.u_for(attack.u_family[i].first);
    CHECK((u - attack.u_family[i].second).norm() == 0.0);
  }
  // decoded strategy still assesses perfect
  ProtocolConfig config;
  config.basis_set = {attack.u_family[0].first, attack.u_family[1].first};
  CHECK(assess_strategy(config, back).is_perfect);
}

TEST_CASE("strategy errors name the offending key") {
  CHECK_THROWS_WITH_AS(strategy_from_json("{}"), doctest::Contains("'dims'"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(strategy_from_json("{\"dims\": {\"A\":1,\"B\":2,\"C\":1}}"),
                       doctest::Contains("'D'"), std::runtime_error);
}

TEST_CASE("text file round trip") {
  std::string path = "qpv_io_test_tmp.json";
  write_text_file(path, "{\"k\": 1}\n");
  CHECK(read_text_file(path) == "{\"k\": 1}\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("does_not_exist_qpv.json"), std::runtime_error);
}
