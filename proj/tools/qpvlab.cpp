// Command-line front end: reproducible protocol experiments with
// machine-readable JSON reports.
//
// Exit codes: 0 success / property holds, 2 property fails,
// 1 usage or input error.

#include <chrono>
#include <ctime>
#include <exception>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qpv/io.hpp"
#include "qpv/version.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPropertyFails = 2;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

json envelope(const std::string& command, json config, std::uint64_t seed) {
  json out;
  out["schema_version"] = qpv::kReportSchemaVersion;
  out["tool"] = {{"name", qpv::kToolName}, {"version", qpv::kToolVersion}};
  out["generated_at"] = iso_timestamp();
  out["command"] = command;
  out["seed"] = seed;
  out["config"] = std::move(config);
  return out;
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    qpv::write_text_file(out_path, text);
  }
}

qpv::QubitProjector random_bloch_projector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector3d c;
  do {
    c = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
  } while (c.norm() < 1e-9);
  return qpv::QubitProjector::from_bloch(c);
}

int cmd_check_hidden(const std::string& path, double tol, const std::string& out_path) {
  qpv::HiddenInstance inst = qpv::load_instance(path);
  qpv::HiddenVerdict marginal = qpv::check_marginal_distance(inst, tol);
  qpv::HiddenVerdict vector_eq = qpv::check_vector_equations(inst, tol);
  qpv::HiddenVerdict block_eq = qpv::check_block_equations(inst, tol);

  json config;
  config["instance"] = path;
  config["tol"] = tol;
  json report = envelope("check-hidden", std::move(config), 0);
  report["result"] = {
      {"is_hidden", marginal.is_hidden},
      {"criteria",
       {{"marginal_distance", json::parse(qpv::verdict_to_json(marginal))},
        {"vector_equations", json::parse(qpv::verdict_to_json(vector_eq))},
        {"block_equations", json::parse(qpv::verdict_to_json(block_eq))}}},
      {"criteria_agree", marginal.is_hidden == vector_eq.is_hidden &&
                             vector_eq.is_hidden == block_eq.is_hidden},
  };
  emit(report, out_path);
  return marginal.is_hidden ? kExitOk : kExitPropertyFails;
}

int cmd_simulate(int runs, std::uint64_t seed, double d, double h, double c,
                 const std::string& out_path) {
  qpv::ProtocolConfig config;
  config.d = d;
  config.h = h;
  config.c_light = c;
  std::mt19937_64 rng(seed);
  int accepted = 0;
  json verdicts = json::array();
  json first_report;
  for (int i = 0; i < runs; ++i) {
    qpv::QubitProjector p = random_bloch_projector(rng);
    int z = static_cast<int>(rng() & 1u);
    config.basis_set = {p};
    qpv::RunReport rr = qpv::run_honest(config, p, z, rng());
    if (rr.accepted) ++accepted;
    verdicts.push_back(rr.accepted ? "ACCEPT" : "ABORT");
    if (i == 0) first_report = json::parse(qpv::run_report_to_json(rr));
  }
  json cfg;
  cfg["runs"] = runs;
  cfg["d"] = d;
  cfg["h"] = h;
  cfg["c_light"] = c;
  json report = envelope("simulate", std::move(cfg), seed);
  report["result"] = {
      {"accepted", accepted},
      {"all_accept", accepted == runs},
      {"expected_event_times", {0.0, d / c, 2.0 * d / c}},
      {"verdicts", std::move(verdicts)},
      {"first_run", std::move(first_report)},
  };
  emit(report, out_path);
  return accepted == runs ? kExitOk : kExitPropertyFails;
}

int cmd_verify_attack(const std::vector<std::string>& extra_bases, double d, double h,
                      double c, const std::string& out_path) {
  qpv::CheatingStrategy attack = qpv::bb84_attack();
  qpv::ProtocolConfig config;
  config.d = d;
  config.h = h;
  config.c_light = c;
  for (const auto& [basis, u] : attack.u_family) {
    (void)u;
    config.basis_set.push_back(basis);
  }
  for (const std::string& text : extra_bases)
    config.basis_set.push_back(qpv::parse_projector(text));

  // Missing U_P for an extra basis surfaces here as an input error.
  qpv::CheatAssessment assessment = qpv::assess_strategy(config, attack);

  bool acceptance_ok = true;
  for (const qpv::BasisAssessment& ba : assessment.per_basis)
    if (ba.accept_given_z0 < 1.0 - 1e-9 || ba.accept_given_z1 < 1.0 - 1e-9)
      acceptance_ok = false;

  json timeline = json::array();
  for (const qpv::TimedEvent& e : qpv::cheat_timeline(config)) {
    timeline.push_back({{"time", e.time},
                        {"position", e.position},
                        {"actor", e.actor},
                        {"action", e.action},
                        {"message_id", e.message_id}});
  }

  json cfg;
  cfg["d"] = d;
  cfg["h"] = h;
  cfg["c_light"] = c;
  json basis_names = json::array();
  for (const qpv::QubitProjector& p : config.basis_set)
    basis_names.push_back(qpv::format_projector(p));
  cfg["basis_set"] = std::move(basis_names);
  json report = envelope("verify-attack", std::move(cfg), 0);
  report["result"] = {
      {"assessment", json::parse(qpv::assessment_to_json(assessment))},
      {"acceptance_ok", acceptance_ok},
      {"timeline", std::move(timeline)},
      {"adversary_action_time", (d - h) / c},
      {"adversary_possession_time", (d + h) / c},
  };
  emit(report, out_path);
  return (assessment.is_perfect && acceptance_ok) ? kExitOk : kExitPropertyFails;
}

int cmd_bound(std::int64_t n) {
  if (n < 0) throw CLI::ValidationError("bound", "n must be nonnegative");
  std::cout << qpv::distinct_basis_bound(static_cast<unsigned>(n)) << "\n";
  return kExitOk;
}

qpv::SearchConfig search_config_from_json(const std::string& text) {
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) throw std::runtime_error("search config: malformed JSON");
  qpv::SearchConfig config;
  if (!value.contains("T")) throw std::runtime_error("search config: missing key 'T'");
  for (const auto& name : value["T"])
    config.basis_set.push_back(qpv::parse_projector(name.get<std::string>()));
  if (!value.contains("dims")) throw std::runtime_error("search config: missing key 'dims'");
  const json& dims = value["dims"];
  for (const char* key : {"A", "B", "C", "D"})
    if (!dims.contains(key))
      throw std::runtime_error(std::string("search config: missing key 'dims.") + key + "'");
  config.dims.a = dims["A"].get<Eigen::Index>();
  config.dims.b = dims["B"].get<Eigen::Index>();
  config.dims.c = dims["C"].get<Eigen::Index>();
  config.dims.d = dims["D"].get<Eigen::Index>();
  config.restarts = value.value("restarts", config.restarts);
  config.max_iters = value.value("max_iters", config.max_iters);
  config.seed = value.value("seed", config.seed);
  config.decoder_rounds = value.value("decoder_rounds", config.decoder_rounds);
  config.warm_start_single_basis =
      value.value("warm_start_single_basis", config.warm_start_single_basis);
  if (value.value("inject_bb84", false)) {
    qpv::CheatingStrategy attack = qpv::bb84_attack();
    config.injected.push_back(qpv::encode_strategy(attack, config.basis_set));
  }
  return config;
}

int cmd_search(const std::string& config_path, const std::string& out_path,
               const std::string& csv_path) {
  std::string text = qpv::read_text_file(config_path);
  qpv::SearchConfig config = search_config_from_json(text);
  std::vector<std::string> problems = config.problems();
  if (!problems.empty()) {
    for (const std::string& p : problems) std::cerr << "config error: " << p << "\n";
    return kExitUsage;
  }
  qpv::SearchResult result = qpv::search_cheating(config, &std::cerr);

  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "restart,seed,value\n";
    for (std::size_t i = 0; i < result.per_restart.size(); ++i)
      csv << i << "," << result.per_restart[i].derived_seed << ","
          << result.per_restart[i].value << "\n";
    qpv::write_text_file(csv_path, csv.str());
  }

  json cfg = json::parse(text);
  json report = envelope("search", std::move(cfg), config.seed);
  report["result"] = json::parse(qpv::search_result_to_json(result));
  emit(report, out_path);
  return kExitOk;
}

struct ChannelSpec {
  qpv::Matrix u;
  Eigen::Index w_dim, v1_dim, v2_dim;
  std::string description;
};

ChannelSpec resolve_channel(const std::string& name) {
  if (name == "builtin:bb84") {
    qpv::InducedChannel ch = qpv::induced_channel(qpv::bb84_attack());
    return {ch.u, ch.w_dim, ch.v1_dim, ch.v2_dim, "bb84 induced channel"};
  }
  if (name == "builtin:copy-z") {
    qpv::Matrix u = qpv::copy_isometry(qpv::QubitProjector::from_bloch({0, 0, 1}));
    return {u, 1, 2, 2, "copy isometry in the Z basis"};
  }
  qpv::HiddenInstance inst = qpv::load_instance(name);
  return {inst.u, inst.w_dim, inst.v1_dim, inst.v2_dim, "channel from " + name};
}

int cmd_lambda_scan(const std::string& channel, int attempts, std::uint64_t seed,
                    const std::string& out_path) {
  ChannelSpec spec = resolve_channel(channel);
  std::vector<qpv::HiddenPair> pairs =
      qpv::find_hidden_pairs(spec.u, spec.w_dim, spec.v1_dim, spec.v2_dim, attempts, seed);
  qpv::ScanReport scan =
      qpv::separation_scan(spec.u, spec.w_dim, spec.v1_dim, spec.v2_dim, pairs);
  int census = qpv::distinct_basis_census(pairs);

  json cfg;
  cfg["channel"] = channel;
  cfg["attempts"] = attempts;
  json report = envelope("lambda-scan", std::move(cfg), seed);
  json bound_value;
  try {
    bound_value = qpv::distinct_basis_bound(static_cast<unsigned>(spec.w_dim));
  } catch (const std::overflow_error&) {
    bound_value = "overflow";  // beyond 64 bits: larger than any census
  }
  report["result"] = {
      {"channel_description", spec.description},
      {"w_dim", spec.w_dim},
      {"certified_pairs", json::parse(qpv::hidden_pairs_to_json(pairs))},
      {"scan", json::parse(qpv::scan_report_to_json(scan))},
      {"census", census},
      {"census_bound", bound_value},
  };
  emit(report, out_path);
  return scan.violations == 0 ? kExitOk : kExitPropertyFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-qubit position-verification laboratory"};
  app.set_help_flag("--help", "print this help message and exit");
  app.set_version_flag("--version", std::string(qpv::kToolVersion));
  app.require_subcommand(1);

  // check-hidden
  std::string ch_instance, ch_out;
  double ch_tol = qpv::kVerdictTol;
  CLI::App* check = app.add_subcommand(
      "check-hidden", "decide the hidden-measurement-channel property for an instance file");
  check->set_help_flag("--help", "print this help message and exit");
  check->add_option("instance", ch_instance, "instance JSON file")->required();
  check->add_option("--tol", ch_tol, "verdict tolerance");
  check->add_option("--out", ch_out, "report path (default: stdout)");

  // simulate
  int sim_runs = 100;
  std::uint64_t sim_seed = 0;
  double sim_d = 1.0, sim_h = 0.5, sim_c = 1.0;
  std::string sim_out;
  CLI::App* sim = app.add_subcommand("simulate", "run the honest protocol on random draws");
  sim->set_help_flag("--help", "print this help message and exit");
  sim->add_option("--runs", sim_runs, "number of (P, z) draws")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--d", sim_d, "verifier half-distance");
  sim->add_option("--h", sim_h, "adversary half-distance");
  sim->add_option("--c-light", sim_c, "speed of light");
  sim->add_option("--out", sim_out, "report path (default: stdout)");

  // verify-attack
  std::vector<std::string> va_bases;
  double va_d = 1.0, va_h = 0.5, va_c = 1.0;
  std::string va_out;
  CLI::App* verify = app.add_subcommand("verify-attack",
                                        "assess the built-in EPR-pair attack");
  verify->set_help_flag("--help", "print this help message and exit");
  verify->add_option("--basis", va_bases, "extra basis beyond the attack's Z and X");
  verify->add_option("--d", va_d, "verifier half-distance");
  verify->add_option("--h", va_h, "adversary half-distance");
  verify->add_option("--c-light", va_c, "speed of light");
  verify->add_option("--out", va_out, "report path (default: stdout)");

  // bound
  std::int64_t bound_n = 0;
  CLI::App* bound = app.add_subcommand("bound", "print the distinct-basis ceiling 4*7^(2n+2)");
  bound->set_help_flag("--help", "print this help message and exit");
  bound->add_option("n", bound_n, "input register dimension")->required();

  // search
  std::string search_config, search_out, search_csv;
  CLI::App* search = app.add_subcommand("search", "numerical search for cheating strategies");
  search->set_help_flag("--help", "print this help message and exit");
  search->add_option("--config", search_config, "search config JSON file")->required();
  search->add_option("--out", search_out, "report path (default: stdout)");
  search->add_option("--csv", search_csv, "per-restart plot data CSV path");

  // lambda-scan
  std::string ls_channel, ls_out;
  int ls_attempts = 16;
  std::uint64_t ls_seed = 0;
  CLI::App* scan = app.add_subcommand(
      "lambda-scan", "find certified hidden pairs and scan them against the separation bound");
  scan->set_help_flag("--help", "print this help message and exit");
  scan->add_option("--channel", ls_channel,
                   "builtin:bb84, builtin:copy-z, or an instance JSON file")
      ->required();
  scan->add_option("--attempts", ls_attempts, "number of random starts")
      ->check(CLI::PositiveNumber);
  scan->add_option("--seed", ls_seed, "random seed");
  scan->add_option("--out", ls_out, "report path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check_hidden(ch_instance, ch_tol, ch_out);
    if (sim->parsed()) return cmd_simulate(sim_runs, sim_seed, sim_d, sim_h, sim_c, sim_out);
    if (verify->parsed()) return cmd_verify_attack(va_bases, va_d, va_h, va_c, va_out);
    if (bound->parsed()) return cmd_bound(bound_n);
    if (search->parsed()) return cmd_search(search_config, search_out, search_csv);
    if (scan->parsed()) return cmd_lambda_scan(ls_channel, ls_attempts, ls_seed, ls_out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
