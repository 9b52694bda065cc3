#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ooc/graph.hpp"
#include "ooc/matlib.hpp"
#include "ooc/plant.hpp"
#include "ooc/sim.hpp"
#include "ooc/synthesis.hpp"

namespace ooc {

/// LQR weights for gain synthesis; an empty matrix means identity.
struct SynthesisWeights {
  Matrix Q;
  Matrix R;
  Matrix Qo;
  Matrix Ro;

  friend bool operator==(const SynthesisWeights&, const SynthesisWeights&) = default;
};

struct ExplicitGeneratorParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.1;

  friend bool operator==(const ExplicitGeneratorParams&, const ExplicitGeneratorParams&) = default;
};

/// In-memory form of the JSON scenario document. Everything is kept as
/// written; defaults are resolved by build_scenario.
///
///   {
///     "plant":     {"A": [[..]], "B": [[..]], "C": [[..]]},
///     "exosystem": {"S": [[..]], "E": [[..]]},            optional
///     "graph":     {"weights": [[..]]},
///     "costs":     {"suite": "paper"} | {"quadratic": [a1, ..]},
///     "generator": "auto" | {"alpha": a, "beta": b, "gamma": g},
///     "gains":     {"K": .., "L1": .., "L2": .., "synthesis": {"Q","R","Qo","Ro"}},  all optional
///     "sim":       {"horizon": n, "k2_off_window": [t0, t1], "x0": [[..] per agent],
///                   "w0", "x_hat0", "w_hat0", "z0": [..], "lambda0": [..]}
///   }
struct ScenarioFile {
  PlantModel plant;
  std::optional<Exosystem> exosystem;
  Matrix graph_weights;
  std::string costs;  // suite descriptor
  std::optional<ExplicitGeneratorParams> generator;  // nullopt means "auto"
  std::optional<Matrix> K;
  std::optional<Matrix> L1;
  std::optional<Matrix> L2;
  SynthesisWeights synthesis;
  std::size_t horizon = 0;
  std::optional<StepWindow> k2_off_window;
  std::vector<std::vector<double>> x0;  // empty: zeros
  std::vector<std::vector<double>> w0;  // empty: first unit vector per agent
  std::vector<std::vector<double>> x_hat0;
  std::vector<std::vector<double>> w_hat0;
  std::vector<double> z0;
  std::vector<double> lambda0;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

/// Throws Parse on malformed documents, unknown keys included.
ScenarioFile parse_scenario(const nlohmann::json& doc);
nlohmann::json to_json(const ScenarioFile& file);

/// Applies "dotted.key=value" edits to a document; the value is read as JSON
/// and falls back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// The four-agent disturbance-rejection benchmark: double-integrator-like
/// agents, rotational exosystem, directed ring, the "paper" cost suite, fixed
/// generator parameters (1, 15, 0.004), fixed gains, horizon 3000 with the
/// disturbance feedforward disabled on [2000, 2250).
ScenarioFile paper_scenario();

struct AssumptionReport {
  bool graph_ok = false;  // weight-balanced and strongly connected
  GraphSpectrum spectrum;
  bool costs_ok = false;  // declared curvature bounds hold on [-20, 20]
  MinimalityReport minimality;
  bool exo_no_stable_modes = true;
  bool composite_observable = false;
  bool params_meet_condition = false;
  RegulatorSolution regulator;
  RegulatorResiduals residuals;
  SchurCertificate feedback_certificate;
  SchurCertificate observer_certificate;
  bool feedback_synthesized = false;
  bool observer_synthesized = false;
  std::vector<std::string> warnings;
};

struct BuiltScenario {
  Scenario scenario;
  AssumptionReport report;
};

/// Resolves defaults, synthesizes missing gains and runs every assumption
/// check. Graph, regulator and stability failures throw; the remaining checks
/// are reported as warnings.
BuiltScenario build_scenario(const ScenarioFile& file);

}  // namespace ooc
