#include "qpv/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qpv {

using json = nlohmann::ordered_json;

namespace {

json matrix_to_value(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back({m(i, j).real(), m(i, j).imag()});
  json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = std::move(entries);
  return out;
}

Matrix matrix_from_value(const json& value, const std::string& key) {
  if (!value.is_object() || !value.contains("rows") || !value.contains("cols") ||
      !value.contains("entries"))
    throw std::runtime_error("matrix literal '" + key +
                             "' needs keys rows, cols, entries");
  Eigen::Index rows = value["rows"].get<Eigen::Index>();
  Eigen::Index cols = value["cols"].get<Eigen::Index>();
  if (rows <= 0 || cols <= 0)
    throw std::runtime_error("matrix literal '" + key + "' has nonpositive dimensions");
  const json& entries = value["entries"];
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("matrix literal '" + key + "' entry count mismatch");
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& e = entries[static_cast<std::size_t>(i * cols + j)];
      if (!e.is_array() || e.size() != 2)
        throw std::runtime_error("matrix literal '" + key +
                                 "' entries must be [re, im] pairs");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw std::runtime_error("matrix literal '" + key + "' has non-finite entries");
    }
  return m;
}

json vector_to_value(const Vector& v) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    entries.push_back({v(i).real(), v(i).imag()});
  return entries;
}

Vector vector_from_value(const json& value, const std::string& key) {
  if (!value.is_array())
    throw std::runtime_error("vector '" + key + "' must be an array of [re, im] pairs");
  Vector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    const json& e = value[i];
    if (!e.is_array() || e.size() != 2)
      throw std::runtime_error("vector '" + key + "' entries must be [re, im] pairs");
    v(static_cast<Eigen::Index>(i)) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

json parse_text(const std::string& text, const char* what) {
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded())
    throw std::runtime_error(std::string(what) + ": malformed JSON");
  return value;
}

const json& require_key(const json& value, const char* key, const char* what) {
  if (!value.is_object() || !value.contains(key))
    throw std::runtime_error(std::string(what) + ": missing key '" + key + "'");
  return value[key];
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string matrix_to_json(const Matrix& m) { return matrix_to_value(m).dump(); }

Matrix matrix_from_json(const std::string& text) {
  return matrix_from_value(parse_text(text, "matrix"), "matrix");
}

QubitProjector parse_projector(const std::string& text) {
  auto split = [](const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
      out.push_back(v);
    }
    return out;
  };
  if (text.rfind("bloch:", 0) == 0) {
    std::vector<double> v = split(text.substr(6));
    if (v.size() != 3)
      throw std::invalid_argument("projector syntax bloch: needs 3 components");
    return QubitProjector::from_bloch({v[0], v[1], v[2]});
  }
  if (text.rfind("vec:", 0) == 0) {
    std::vector<double> v = split(text.substr(4));
    if (v.size() != 4)
      throw std::invalid_argument("projector syntax vec: needs 4 components");
    return QubitProjector::from_statevec(Complex(v[0], v[1]), Complex(v[2], v[3]));
  }
  throw std::invalid_argument("projector syntax must start with 'bloch:' or 'vec:', got '" +
                              text + "'");
}

std::string format_projector(const QubitProjector& p) {
  return "bloch:" + format_double(p.bloch.x()) + "," + format_double(p.bloch.y()) +
         "," + format_double(p.bloch.z());
}

HiddenInstance instance_from_json(const std::string& text) {
  json value = parse_text(text, "instance");
  HiddenInstance inst;
  inst.u = matrix_from_value(require_key(value, "U", "instance"), "U");
  inst.w_dim = require_key(value, "w_dim", "instance").get<Eigen::Index>();
  inst.v1_dim = require_key(value, "v1_dim", "instance").get<Eigen::Index>();
  inst.v2_dim = require_key(value, "v2_dim", "instance").get<Eigen::Index>();
  inst.w = vector_from_value(require_key(value, "w", "instance"), "w");
  inst.p = parse_projector(require_key(value, "P", "instance").get<std::string>());
  inst.validate();
  return inst;
}

std::string instance_to_json(const HiddenInstance& inst) {
  json out;
  out["U"] = matrix_to_value(inst.u);
  out["w_dim"] = inst.w_dim;
  out["v1_dim"] = inst.v1_dim;
  out["v2_dim"] = inst.v2_dim;
  out["w"] = vector_to_value(inst.w);
  out["P"] = format_projector(inst.p);
  return out.dump(2);
}

HiddenInstance load_instance(const std::string& path) {
  return instance_from_json(read_text_file(path));
}

CheatingStrategy strategy_from_json(const std::string& text) {
  json value = parse_text(text, "strategy");
  CheatingStrategy s;
  const json& dims = require_key(value, "dims", "strategy");
  s.dim_a = require_key(dims, "A", "strategy dims").get<Eigen::Index>();
  s.dim_b = require_key(dims, "B", "strategy dims").get<Eigen::Index>();
  s.dim_c = require_key(dims, "C", "strategy dims").get<Eigen::Index>();
  s.dim_d = require_key(dims, "D", "strategy dims").get<Eigen::Index>();
  s.psi = vector_from_value(require_key(value, "psi", "strategy"), "psi");
  const json& family = require_key(value, "U", "strategy");
  if (!family.is_object()) throw std::runtime_error("strategy: 'U' must be an object");
  for (const auto& [key, literal] : family.items())
    s.u_family.emplace_back(parse_projector(key), matrix_from_value(literal, key));
  s.v = matrix_from_value(require_key(value, "V", "strategy"), "V");
  if (value.contains("decoders")) {
    const json& decs = value["decoders"];
    if (!decs.is_object()) throw std::runtime_error("strategy: 'decoders' must be an object");
    for (const auto& [key, entry] : decs.items()) {
      Decoders d;
      d.m0 = matrix_from_value(require_key(entry, "M0", "decoders"), "M0");
      d.m1 = matrix_from_value(require_key(entry, "M1", "decoders"), "M1");
      d.n0 = matrix_from_value(require_key(entry, "N0", "decoders"), "N0");
      d.n1 = matrix_from_value(require_key(entry, "N1", "decoders"), "N1");
      s.decoders.emplace_back(parse_projector(key), std::move(d));
    }
  }
  s.validate();
  return s;
}

std::string strategy_to_json(const CheatingStrategy& s) {
  json out;
  out["dims"] = {{"A", s.dim_a}, {"B", s.dim_b}, {"C", s.dim_c}, {"D", s.dim_d}};
  out["psi"] = vector_to_value(s.psi);
  json family = json::object();
  for (const auto& [basis, u] : s.u_family) family[format_projector(basis)] = matrix_to_value(u);
  out["U"] = std::move(family);
  out["V"] = matrix_to_value(s.v);
  if (!s.decoders.empty()) {
    json decs = json::object();
    for (const auto& [basis, d] : s.decoders) {
      json entry;
      entry["M0"] = matrix_to_value(d.m0);
      entry["M1"] = matrix_to_value(d.m1);
      entry["N0"] = matrix_to_value(d.n0);
      entry["N1"] = matrix_to_value(d.n1);
      decs[format_projector(basis)] = std::move(entry);
    }
    out["decoders"] = std::move(decs);
  }
  return out.dump(2);
}

CheatingStrategy load_strategy(const std::string& path) {
  return strategy_from_json(read_text_file(path));
}

std::string run_report_to_json(const RunReport& report) {
  json events = json::array();
  for (const TimedEvent& e : report.events) {
    json ev;
    ev["time"] = e.time;
    ev["position"] = e.position;
    ev["actor"] = e.actor;
    ev["action"] = e.action;
    ev["message_id"] = e.message_id;
    events.push_back(std::move(ev));
  }
  json out;
  out["events"] = std::move(events);
  out["z"] = report.z;
  out["z1"] = report.z1;
  out["z2"] = report.z2;
  out["verdict"] = report.accepted ? "ACCEPT" : "ABORT";
  return out.dump(2);
}

std::string assessment_to_json(const CheatAssessment& assessment) {
  json per = json::array();
  for (const BasisAssessment& ba : assessment.per_basis) {
    json entry;
    entry["P"] = format_projector(ba.basis);
    entry["acceptance_probability"] = ba.acceptance_probability;
    entry["accept_given_z0"] = ba.accept_given_z0;
    entry["accept_given_z1"] = ba.accept_given_z1;
    entry["dist_AD"] = ba.dist_ad;
    entry["dist_BC"] = ba.dist_bc;
    per.push_back(std::move(entry));
  }
  json out;
  out["per_basis"] = std::move(per);
  out["is_perfect"] = assessment.is_perfect;
  return out.dump(2);
}

std::string verdict_to_json(const HiddenVerdict& verdict) {
  json out;
  out["criterion"] = verdict.criterion;
  out["is_hidden"] = verdict.is_hidden;
  out["residual_v1"] = verdict.residual_v1;
  out["residual_v2"] = verdict.residual_v2;
  out["dist_v1"] = verdict.dist_v1;
  out["dist_v2"] = verdict.dist_v2;
  if (verdict.support_overlap_v1 >= 0.0) {
    out["support_overlap_v1"] = verdict.support_overlap_v1;
    out["support_overlap_v2"] = verdict.support_overlap_v2;
  }
  return out.dump(2);
}

std::string search_result_to_json(const SearchResult& result) {
  json restarts = json::array();
  for (const RestartTrace& rt : result.per_restart) {
    json entry;
    entry["seed"] = rt.derived_seed;
    entry["value"] = rt.value;
    restarts.push_back(std::move(entry));
  }
  json out;
  out["best_worst_case"] = result.best_worst_case;
  out["certified_perfect"] = result.certified_perfect;
  out["per_restart"] = std::move(restarts);
  out["best_params"] = result.best.values;
  return out.dump(2);
}

std::string scan_report_to_json(const ScanReport& report) {
  json pairs = json::array();
  for (const PairMargin& pm : report.pairs) {
    json entry;
    entry["i"] = pm.i;
    entry["j"] = pm.j;
    entry["theta"] = pm.theta;
    entry["input_distance"] = pm.input_distance;
    entry["bound"] = pm.bound;
    entry["margin"] = pm.margin;
    entry["violation"] = pm.violation;
    pairs.push_back(std::move(entry));
  }
  json out;
  out["pairs"] = std::move(pairs);
  out["violations"] = report.violations;
  return out.dump(2);
}

std::string hidden_pairs_to_json(const std::vector<HiddenPair>& pairs) {
  json out = json::array();
  for (const HiddenPair& hp : pairs) {
    json entry;
    entry["c"] = {hp.c.x(), hp.c.y(), hp.c.z()};
    entry["w"] = vector_to_value(hp.w);
    entry["residual"] = hp.residual;
    out.push_back(std::move(entry));
  }
  return out.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing file '" + path + "'");
}

}  // namespace qpv
