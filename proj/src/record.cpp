#include "fracsym/record.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "fracsym/errors.hpp"

namespace fracsym {

using nlohmann::json;

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double to_num(const json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw IoError("record: field '" + name + "' is not a number");
}

const json& field(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains(name)) throw IoError("record: missing field '" + name + "'");
  return j.at(name);
}

double num_field(const json& j, const std::string& name) { return to_num(field(j, name), name); }

std::vector<double> num_array(const json& j, const std::string& name) {
  const json& a = field(j, name);
  if (!a.is_array()) throw IoError("record: field '" + name + "' is not an array");
  std::vector<double> out;
  for (const auto& x : a) out.push_back(to_num(x, name));
  return out;
}

json num_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

int int_field(const json& j, const std::string& name) {
  const json& x = field(j, name);
  if (!x.is_number_integer()) throw IoError("record: field '" + name + "' is not an integer");
  return x.get<int>();
}

}  // namespace

json params_to_json(const FkdvbParams& params) {
  return {{"p", num(params.p.value())},
          {"q", num(params.q.value())},
          {"r", num(params.r.value())},
          {"branch", to_string(params.branch)}};
}

FkdvbParams params_from_json(const json& j) {
  const bool classical = j.contains("branch") && j.at("branch") == "classical";
  try {
    return FkdvbParams(num_field(j, "p"), num_field(j, "q"), num_field(j, "r"), classical);
  } catch (const DomainError& e) {
    throw IoError(std::string("record: invalid params: ") + e.what());
  }
}

json candidate_to_json(const ReducedSolutionCandidate& c) {
  json basis = {{"gamma0", num(c.gamma0)},
                {"delta", num(c.delta)},
                {"exponents", num_list(c.exponents)},
                {"z_min", num(c.z0)},
                {"z_max", num(c.z1)},
                {"z_ref", num(c.z_ref)},
                {"w0", num(c.w0)},
                {"collocation_points", c.collocation_points}};
  return {{"params", params_to_json(c.params)},
          {"basis", basis},
          {"coefficients", num_list(c.coefficients)},
          {"residual_norm", num(c.residual_norm)},
          {"normalization_error", num(c.normalization_error)},
          {"converged", c.converged},
          {"iterations", c.iterations},
          {"best_start", c.best_start},
          {"cost_history", num_list(c.cost_history)},
          {"diagnostics", c.diagnostics}};
}

ReducedSolutionCandidate candidate_from_json(const json& j) {
  ReducedSolutionCandidate c;
  c.params = params_from_json(field(j, "params"));
  const json& b = field(j, "basis");
  c.gamma0 = num_field(b, "gamma0");
  c.delta = num_field(b, "delta");
  c.exponents = num_array(b, "exponents");
  c.z0 = num_field(b, "z_min");
  c.z1 = num_field(b, "z_max");
  c.z_ref = num_field(b, "z_ref");
  c.w0 = num_field(b, "w0");
  c.collocation_points = int_field(b, "collocation_points");
  c.coefficients = num_array(j, "coefficients");
  if (c.coefficients.size() != c.exponents.size()) {
    throw IoError("record: coefficients and exponents differ in length");
  }
  c.residual_norm = num_field(j, "residual_norm");
  const json& conv = field(j, "converged");
  if (!conv.is_boolean()) throw IoError("record: field 'converged' is not a boolean");
  c.converged = conv.get<bool>();
  if (j.contains("normalization_error")) c.normalization_error = num_field(j, "normalization_error");
  if (j.contains("iterations")) c.iterations = int_field(j, "iterations");
  if (j.contains("best_start")) c.best_start = int_field(j, "best_start");
  if (j.contains("cost_history")) c.cost_history = num_array(j, "cost_history");
  if (j.contains("diagnostics") && j.at("diagnostics").is_string()) {
    c.diagnostics = j.at("diagnostics").get<std::string>();
  }
  return c;
}

void write_candidate_file(const std::string& path, const ReducedSolutionCandidate& candidate) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << candidate_to_json(candidate).dump(2) << "\n";
  if (!os) throw IoError("write to '" + path + "' failed");
}

ReducedSolutionCandidate read_candidate_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
  return candidate_from_json(j);
}

json symmetry_to_json(const FkdvbParams& params) {
  const ScalingGenerator g = solve_scaling(params);
  const Invariants inv = invariants(params);
  return {{"params", params_to_json(params)},
          {"generator", {{"alpha", g.alpha}, {"beta", g.beta}, {"gamma", g.gamma}}},
          {"invariants",
           {{"z", inv.z_text()}, {"w", inv.w_text()}, {"z_exp2", inv.z_exp2}, {"w_exp2", inv.w_exp2}}},
          {"equivariance_exponent", equivariance_exponent(g, params)}};
}

}  // namespace fracsym
