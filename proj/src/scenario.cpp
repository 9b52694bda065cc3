#include "ooc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ooc/costs.hpp"
#include "ooc/error.hpp"

namespace ooc {
namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) parse_error(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.contains(key)) parse_error(where, "unknown key '" + key + "'");
}

const json& required(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error(where, std::string("missing key '") + key + "'");
  return *it;
}

double parse_number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(where, "non-finite number");
  return v;
}

std::vector<double> parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where, "expected an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(parse_number(j[k], where + "[" + std::to_string(k) + "]"));
  return v;
}

std::vector<std::vector<double>> parse_vector_list(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where, "expected an array of per-agent arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_vector(j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where, "expected a nested row-major array");
  if (j.empty()) return {};
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) parse_error(where, "each row must be an array");
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) parse_error(where, "ragged rows");
  }
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = parse_number(j[i][k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix or_identity(const Matrix& m, std::size_t n) { return m.empty() ? Matrix::identity(n) : m; }

Matrix column_or(const std::vector<std::vector<double>>& values, std::size_t agent, Matrix fallback,
                 std::size_t dim, const char* what) {
  if (values.empty()) return fallback;
  if (values[agent].size() != dim) {
    std::ostringstream msg;
    msg << what << " of agent " << agent << " has " << values[agent].size() << " entries, expected " << dim;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  return Matrix::column(values[agent]);
}

void check_count(std::size_t got, std::size_t agents, const char* what) {
  if (got != 0 && got != agents) {
    std::ostringstream msg;
    msg << what << " lists " << got << " agents, the graph has " << agents;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

ScenarioFile parse_scenario(const json& doc) {
  check_keys(doc, {"plant", "exosystem", "graph", "costs", "generator", "gains", "sim"}, "scenario");
  ScenarioFile f;

  const json& plant = required(doc, "plant", "scenario");
  check_keys(plant, {"A", "B", "C"}, "plant");
  f.plant.A = parse_matrix(required(plant, "A", "plant"), "plant.A");
  f.plant.B = parse_matrix(required(plant, "B", "plant"), "plant.B");
  f.plant.C = parse_matrix(required(plant, "C", "plant"), "plant.C");

  if (const auto it = doc.find("exosystem"); it != doc.end()) {
    check_keys(*it, {"S", "E"}, "exosystem");
    f.exosystem = Exosystem{parse_matrix(required(*it, "S", "exosystem"), "exosystem.S"),
                            parse_matrix(required(*it, "E", "exosystem"), "exosystem.E")};
  }

  const json& graph = required(doc, "graph", "scenario");
  check_keys(graph, {"weights"}, "graph");
  f.graph_weights = parse_matrix(required(graph, "weights", "graph"), "graph.weights");

  const json& costs = required(doc, "costs", "scenario");
  check_keys(costs, {"suite", "quadratic"}, "costs");
  if (costs.contains("suite") == costs.contains("quadratic"))
    parse_error("costs", "give exactly one of 'suite' or 'quadratic'");
  try {
    if (costs.contains("suite")) {
      if (!costs["suite"].is_string()) parse_error("costs.suite", "expected a string");
      f.costs = builtin_suite(costs["suite"].get<std::string>()).descriptor();
    } else {
      f.costs = quadratic_suite(parse_vector(costs["quadratic"], "costs.quadratic")).descriptor();
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UnknownSuite) parse_error("costs", e.what());
    throw;
  }

  if (const auto it = doc.find("generator"); it != doc.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "auto") parse_error("generator", "expected \"auto\" or an object");
    } else {
      check_keys(*it, {"alpha", "beta", "gamma"}, "generator");
      ExplicitGeneratorParams p;
      p.alpha = parse_number(required(*it, "alpha", "generator"), "generator.alpha");
      p.beta = parse_number(required(*it, "beta", "generator"), "generator.beta");
      p.gamma = parse_number(required(*it, "gamma", "generator"), "generator.gamma");
      if (!(p.alpha > 0 && p.beta > 0 && p.gamma > 0)) parse_error("generator", "alpha, beta and gamma must be positive");
      f.generator = p;
    }
  }

  if (const auto it = doc.find("gains"); it != doc.end()) {
    check_keys(*it, {"K", "L1", "L2", "synthesis"}, "gains");
    if (it->contains("K")) f.K = parse_matrix((*it)["K"], "gains.K");
    if (it->contains("L1")) f.L1 = parse_matrix((*it)["L1"], "gains.L1");
    if (it->contains("L2")) f.L2 = parse_matrix((*it)["L2"], "gains.L2");
    if (f.L1.has_value() != f.L2.has_value()) parse_error("gains", "L1 and L2 must be given together");
    if (const auto s = it->find("synthesis"); s != it->end()) {
      check_keys(*s, {"Q", "R", "Qo", "Ro"}, "gains.synthesis");
      if (s->contains("Q")) f.synthesis.Q = parse_matrix((*s)["Q"], "gains.synthesis.Q");
      if (s->contains("R")) f.synthesis.R = parse_matrix((*s)["R"], "gains.synthesis.R");
      if (s->contains("Qo")) f.synthesis.Qo = parse_matrix((*s)["Qo"], "gains.synthesis.Qo");
      if (s->contains("Ro")) f.synthesis.Ro = parse_matrix((*s)["Ro"], "gains.synthesis.Ro");
    }
  }

  const json& sim = required(doc, "sim", "scenario");
  check_keys(sim, {"horizon", "k2_off_window", "x0", "w0", "x_hat0", "w_hat0", "z0", "lambda0"}, "sim");
  const json& horizon = required(sim, "horizon", "sim");
  if (!horizon.is_number_unsigned()) parse_error("sim.horizon", "expected a nonnegative integer");
  f.horizon = horizon.get<std::size_t>();
  if (const auto it = sim.find("k2_off_window"); it != sim.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_unsigned() || !(*it)[1].is_number_unsigned())
      parse_error("sim.k2_off_window", "expected [start, end] step indices");
    f.k2_off_window = StepWindow{(*it)[0].get<std::size_t>(), (*it)[1].get<std::size_t>()};
    if (f.k2_off_window->start > f.k2_off_window->end) parse_error("sim.k2_off_window", "start exceeds end");
  }
  if (sim.contains("x0")) f.x0 = parse_vector_list(sim["x0"], "sim.x0");
  if (sim.contains("w0")) f.w0 = parse_vector_list(sim["w0"], "sim.w0");
  if (sim.contains("x_hat0")) f.x_hat0 = parse_vector_list(sim["x_hat0"], "sim.x_hat0");
  if (sim.contains("w_hat0")) f.w_hat0 = parse_vector_list(sim["w_hat0"], "sim.w_hat0");
  if (sim.contains("z0")) f.z0 = parse_vector(sim["z0"], "sim.z0");
  if (sim.contains("lambda0")) f.lambda0 = parse_vector(sim["lambda0"], "sim.lambda0");
  return f;
}

json to_json(const ScenarioFile& f) {
  json doc;
  doc["plant"] = {{"A", matrix_json(f.plant.A)}, {"B", matrix_json(f.plant.B)}, {"C", matrix_json(f.plant.C)}};
  if (f.exosystem) doc["exosystem"] = {{"S", matrix_json(f.exosystem->S)}, {"E", matrix_json(f.exosystem->E)}};
  doc["graph"] = {{"weights", matrix_json(f.graph_weights)}};
  doc["costs"] = {{"suite", f.costs}};
  if (f.generator)
    doc["generator"] = {{"alpha", f.generator->alpha}, {"beta", f.generator->beta}, {"gamma", f.generator->gamma}};
  else
    doc["generator"] = "auto";

  json gains = json::object();
  if (f.K) gains["K"] = matrix_json(*f.K);
  if (f.L1) gains["L1"] = matrix_json(*f.L1);
  if (f.L2) gains["L2"] = matrix_json(*f.L2);
  json synth = json::object();
  if (!f.synthesis.Q.empty()) synth["Q"] = matrix_json(f.synthesis.Q);
  if (!f.synthesis.R.empty()) synth["R"] = matrix_json(f.synthesis.R);
  if (!f.synthesis.Qo.empty()) synth["Qo"] = matrix_json(f.synthesis.Qo);
  if (!f.synthesis.Ro.empty()) synth["Ro"] = matrix_json(f.synthesis.Ro);
  if (!synth.empty()) gains["synthesis"] = synth;
  doc["gains"] = gains;

  json sim = {{"horizon", f.horizon}};
  if (f.k2_off_window) sim["k2_off_window"] = {f.k2_off_window->start, f.k2_off_window->end};
  if (!f.x0.empty()) sim["x0"] = f.x0;
  if (!f.w0.empty()) sim["w0"] = f.w0;
  if (!f.x_hat0.empty()) sim["x_hat0"] = f.x_hat0;
  if (!f.w_hat0.empty()) sim["w_hat0"] = f.w_hat0;
  if (!f.z0.empty()) sim["z0"] = f.z0;
  if (!f.lambda0.empty()) sim["lambda0"] = f.lambda0;
  doc["sim"] = sim;
  return doc;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) parse_error("override", "expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) parse_error("override", "empty path component in '" + key + "'");
    if (!node->is_object()) *node = json::object();
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  *node = std::move(value);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open scenario file '" + path.string() + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::Parse, "'" + path.string() + "' is not valid JSON");
  return doc;
}

ScenarioFile paper_scenario() {
  const double c = std::cos(1.0), s = std::sin(1.0);
  ScenarioFile f;
  f.plant = {Matrix{{1, 1}, {0, 1}}, Matrix{{0.5}, {1}}, Matrix{{1, 0}}};
  f.exosystem = Exosystem{Matrix{{c, s}, {-s, c}}, Matrix{{0.5, 0.5}, {s - c, -c - s}}};
  f.graph_weights = Digraph::directed_ring(4).weights();
  f.costs = "paper";
  f.generator = ExplicitGeneratorParams{1.0, 15.0, 0.004};
  f.K = Matrix{{-0.4345, -1.0285}};
  f.L1 = Matrix{{-1.8184}, {-0.3543}};
  f.L2 = Matrix{{-0.1527}, {-0.3141}};
  f.horizon = 3000;
  f.k2_off_window = StepWindow{2000, 2250};
  // unit-norm exosystem states a quarter turn apart, so the disturbances differ
  // between agents and switching off rejection visibly breaks consensus
  f.w0 = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  return f;
}

BuiltScenario build_scenario(const ScenarioFile& f) {
  AssumptionReport rep;

  PlantModel plant = f.plant;
  plant.validate();
  const std::size_t nx = plant.state_dim();
  const std::size_t nu = plant.input_dim();
  Exosystem exo = f.exosystem.value_or(Exosystem::none(nx));
  exo.validate(plant);
  const std::size_t nw = exo.dim();

  Digraph graph(f.graph_weights);
  const std::size_t n = graph.size();
  rep.graph_ok = is_weight_balanced(graph) && is_strongly_connected(graph);
  if (!rep.graph_ok) {
    std::string why = !is_weight_balanced(graph) ? "not weight-balanced" : "not strongly connected";
    throw Error(ErrorKind::AssumptionViolated,
                "graph assumption: the digraph must be strongly connected and weight-balanced (" + why + ")");
  }
  rep.spectrum = spectrum(graph);

  CostSuite costs = builtin_suite(f.costs);
  if (costs.size() != n) {
    std::ostringstream msg;
    msg << "cost suite '" << f.costs << "' has " << costs.size() << " members, the graph has " << n << " nodes";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  rep.costs_ok = true;
  for (const auto& fi : costs) {
    if (const BoundsCheck chk = validate_cost_bounds(fi, -20.0, 20.0, 201); !chk) {
      rep.costs_ok = false;
      std::ostringstream msg;
      msg << "cost '" << fi.name() << "' violates its declared bounds (" << fi.l_lower() << ", " << fi.l_upper()
          << ") between " << chk.s1 << " and " << chk.s2;
      rep.warnings.push_back(msg.str());
    }
  }

  rep.minimality = check_minimality(plant);
  if (!rep.minimality.minimal())
    rep.warnings.push_back(std::string("plant (C, A, B) is not minimal:") +
                           (rep.minimality.controllable ? "" : " uncontrollable") +
                           (rep.minimality.observable ? "" : " unobservable"));
  rep.exo_no_stable_modes = has_no_stable_modes(exo);
  if (!rep.exo_no_stable_modes) rep.warnings.push_back("exosystem S has eigenvalues inside the unit circle");

  rep.regulator = solve_regulator(plant, exo);
  rep.residuals = regulator_residuals(plant, exo, rep.regulator);

  rep.composite_observable = check_composite_observability(plant, exo);
  if (!rep.composite_observable)
    throw Error(ErrorKind::AssumptionViolated,
                "observability assumption: the pair ([C 0], [[A, E], [0, S]]) is not observable");

  Matrix k;
  if (f.K) {
    k = *f.K;
    if (k.rows() != nu || k.cols() != nx) throw Error(ErrorKind::DimensionMismatch, "gains.K must be n_u x n_x");
  } else {
    k = design_feedback(plant, or_identity(f.synthesis.Q, nx), or_identity(f.synthesis.R, nu));
    rep.feedback_synthesized = true;
  }
  rep.feedback_certificate = schur_certificate(plant.A + plant.B * k);
  if (!rep.feedback_certificate.schur) throw Error(ErrorKind::AssumptionViolated, "A + B K is not Schur stable");

  ObserverGains obs;
  if (f.L1) {
    obs = {*f.L1, *f.L2};
    if (obs.L1.rows() != nx || obs.L1.cols() != 1 || obs.L2.rows() != nw || obs.L2.cols() != 1)
      throw Error(ErrorKind::DimensionMismatch, "gains.L1 must be n_x x 1 and gains.L2 n_w x 1");
  } else {
    obs = design_observer(plant, exo, or_identity(f.synthesis.Qo, nx + nw), or_identity(f.synthesis.Ro, 1));
    rep.observer_synthesized = true;
  }
  rep.observer_certificate = schur_certificate(observer_error_matrix(plant, exo, obs.L1, obs.L2));
  if (!rep.observer_certificate.schur)
    throw Error(ErrorKind::AssumptionViolated, "observer error matrix [[A + L1 C, E], [L2 C, S]] is not Schur stable");

  GeneratorParams params;
  if (f.generator) {
    params.alpha = f.generator->alpha;
    params.beta = f.generator->beta;
    params.gamma = f.generator->gamma;
    params.meets_sufficient_condition =
        meets_sufficient_condition(params.alpha, params.beta, params.gamma, costs.l_lower(), costs.l_upper(),
                                   rep.spectrum.lambda2, rep.spectrum.lambdaN);
  } else {
    if (!(rep.spectrum.lambda2 > 0.0))
      throw Error(ErrorKind::AssumptionViolated, "automatic generator parameters need lambda2 > 0 (two or more agents)");
    params = default_params(costs.l_lower(), costs.l_upper(), rep.spectrum.lambda2, rep.spectrum.lambdaN);
  }
  rep.params_meet_condition = params.meets_sufficient_condition;
  if (!params.meets_sufficient_condition)
    rep.warnings.push_back("generator parameters do not meet the sufficient convergence condition; "
                           "convergence is not certified");

  check_count(f.x0.size(), n, "sim.x0");
  check_count(f.w0.size(), n, "sim.w0");
  check_count(f.x_hat0.size(), n, "sim.x_hat0");
  check_count(f.w_hat0.size(), n, "sim.w_hat0");
  check_count(f.z0.size(), n, "sim.z0");
  check_count(f.lambda0.size(), n, "sim.lambda0");

  Matrix w_default(nw, 1);
  if (nw > 0) w_default(0, 0) = 1.0;
  std::vector<Matrix> x0, w0;
  std::vector<ObserverState> observer0;
  for (std::size_t i = 0; i < n; ++i) {
    x0.push_back(column_or(f.x0, i, Matrix(nx, 1), nx, "sim.x0"));
    w0.push_back(column_or(f.w0, i, w_default, nw, "sim.w0"));
    observer0.push_back({column_or(f.x_hat0, i, Matrix(nx, 1), nx, "sim.x_hat0"),
                         column_or(f.w_hat0, i, Matrix(nw, 1), nw, "sim.w_hat0")});
  }
  GeneratorState gen0 = GeneratorState::zeros(n);
  if (!f.z0.empty()) gen0.z = f.z0;
  if (!f.lambda0.empty()) gen0.lambda = f.lambda0;

  Scenario scenario{std::move(plant),
                    std::move(exo),
                    std::move(graph),
                    std::move(costs),
                    params,
                    compose_gains(k, obs.L1, obs.L2, rep.regulator),
                    f.horizon,
                    f.k2_off_window,
                    std::move(x0),
                    std::move(w0),
                    std::move(observer0),
                    std::move(gen0)};
  scenario.validate();
  return {std::move(scenario), std::move(rep)};
}

}  // namespace ooc
