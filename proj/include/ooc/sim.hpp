#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ooc/costs.hpp"
#include "ooc/generator.hpp"
#include "ooc/graph.hpp"
#include "ooc/matlib.hpp"
#include "ooc/observer.hpp"
#include "ooc/plant.hpp"
#include "ooc/synthesis.hpp"

namespace ooc {

/// Half-open step interval [start, end).
struct StepWindow {
  std::size_t start = 0;
  std::size_t end = 0;

  bool contains(std::size_t t) const noexcept { return t >= start && t < end; }
  friend bool operator==(const StepWindow&, const StepWindow&) = default;
};

/// A fully resolved closed-loop experiment over a homogeneous network.
struct Scenario {
  PlantModel plant;
  Exosystem exo;
  Digraph graph;
  CostSuite costs;
  GeneratorParams params;
  ControllerGains gains;
  std::size_t horizon = 0;
  std::optional<StepWindow> k2_off_window;  // disturbance feedforward disabled here
  std::vector<Matrix> x0;
  std::vector<Matrix> w0;
  std::vector<ObserverState> observer0;
  GeneratorState generator0;

  std::size_t agents() const noexcept { return graph.size(); }

  /// Throws DimensionMismatch on inconsistent sizes and AssumptionViolated if
  /// the graph is not strongly connected and weight-balanced.
  void validate() const;
};

struct TraceRow {
  std::size_t t = 0;
  std::size_t agent = 0;
  double y = 0.0;
  double z = 0.0;
  double lambda = 0.0;
  double u = 0.0;   // the input for single-input plants, its norm otherwise
  double e = 0.0;   // y - y*
  double est_err = 0.0;
  double xi = 0.0;  // control discrepancy u - u0, same convention as u
  double V = 0.0;   // generator Lyapunov value, shared by all agents at t

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

/// Full per-agent vectors at one step, kept only on request.
struct AgentSnapshot {
  Matrix x;
  Matrix w;
  Matrix x_hat;
  Matrix w_hat;
  Matrix u;
  Matrix xi;
};

struct Trace {
  std::size_t agents = 0;
  std::size_t horizon = 0;
  double y_star = 0.0;
  std::vector<TraceRow> rows;            // (t, i) at index t * agents + i
  std::vector<AgentSnapshot> snapshots;  // same layout, empty unless requested

  const TraceRow& at(std::size_t t, std::size_t agent) const { return rows[t * agents + agent]; }
  const AgentSnapshot& snapshot(std::size_t t, std::size_t agent) const { return snapshots[t * agents + agent]; }
};

/// u = K x^ + K1 z + K2 w^, dropping the K2 term when disabled.
Matrix control_law(const ControllerGains& gains, double z, const ObserverState& observer, bool k2_enabled);

struct SimOptions {
  bool record_snapshots = false;
};

/// Runs the closed loop for horizon steps, recording t = 0..horizon. Each
/// step reads outputs, computes controls, then advances observers, plants,
/// exosystems and the generator from pre-step values. Throws Diverged when a
/// state entry exceeds 1e12 in magnitude.
Trace simulate(const Scenario& s, const SimOptions& options = {});

/// Aggregate minimizer computed independently of the generator.
double reference_optimum(const CostSuite& suite);

struct WindowReport {
  StepWindow window;
  double max_error_in_window = 0.0;
  double max_spread_in_window = 0.0;
  // Same-length stretch right before the window.
  double pre_window_error = 0.0;
  double pre_window_spread = 0.0;
  double final_error = 0.0;  // max_i |e_i| at the horizon
};

struct Metrics {
  std::vector<double> max_abs_error;  // max_i |y_i(t) - y*|
  std::vector<double> max_abs_xi;     // max_i |Xi_i(t)|
  std::vector<double> spread;         // max_i y_i(t) - min_i y_i(t)
  double terminal_spread = 0.0;
  double terminal_mean_output = 0.0;
  std::size_t tail_start = 0;  // last 10% of steps
  double tail_error = 0.0;
  double tail_xi = 0.0;
  std::optional<WindowReport> window;

  /// Max of max_abs_error over t in [t0, t1] (inclusive, clamped).
  double max_error_between(std::size_t t0, std::size_t t1) const;
};

Metrics metrics(const Trace& trace, double y_star, std::optional<StepWindow> window = std::nullopt);

}  // namespace ooc
