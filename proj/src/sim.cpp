#include "ooc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::DimensionMismatch, "scenario: " + what);
}

bool is_column(const Matrix& m, std::size_t n) { return m.rows() == n && m.cols() == 1; }

double scalarize(const Matrix& v) { return v.rows() == 1 ? v(0, 0) : frobenius_norm(v); }

void check_bounded(const Matrix& m, const char* what, std::size_t t, std::size_t agent) {
  for (double v : m.data()) {
    if (!(std::abs(v) <= 1e12)) {
      std::ostringstream msg;
      msg << what << " of agent " << agent << " left |.| <= 1e12 at t = " << t;
      throw Error(ErrorKind::Diverged, msg.str());
    }
  }
}

}  // namespace

void Scenario::validate() const {
  plant.validate();
  exo.validate(plant);
  const std::size_t n = agents();
  const std::size_t nx = plant.state_dim();
  const std::size_t nu = plant.input_dim();
  const std::size_t nw = exo.dim();
  require(costs.size() == n, "cost suite size differs from the number of agents");
  require(gains.K.rows() == nu && gains.K.cols() == nx, "K must be n_u x n_x");
  require(gains.K1.rows() == nu && gains.K1.cols() == 1, "K1 must be n_u x 1");
  require(gains.K2.rows() == nu && gains.K2.cols() == nw, "K2 must be n_u x n_w");
  require(is_column(gains.L1, nx) && is_column(gains.L2, nw), "observer gains must be n_x x 1 and n_w x 1");
  require(x0.size() == n && w0.size() == n && observer0.size() == n, "one initial state per agent is required");
  for (std::size_t i = 0; i < n; ++i) {
    require(is_column(x0[i], nx) && is_column(w0[i], nw), "initial agent or disturbance state size");
    require(is_column(observer0[i].x_hat, nx) && is_column(observer0[i].w_hat, nw), "initial observer state size");
  }
  require(generator0.z.size() == n && generator0.lambda.size() == n, "initial generator state size");
  if (!is_weight_balanced(graph) || !is_strongly_connected(graph))
    throw Error(ErrorKind::AssumptionViolated,
                "graph assumption: the digraph must be strongly connected and weight-balanced");
}

Matrix control_law(const ControllerGains& gains, double z, const ObserverState& observer, bool k2_enabled) {
  Matrix u = gains.K * observer.x_hat + gains.K1 * z;
  if (k2_enabled) u += gains.K2 * observer.w_hat;
  return u;
}

double reference_optimum(const CostSuite& suite) {
  const auto [lo, hi] = find_bracket(suite);
  return oracle_minimize(suite, lo, hi);
}

Trace simulate(const Scenario& s, const SimOptions& options) {
  s.validate();
  const std::size_t n = s.agents();
  const Matrix lap = laplacian(s.graph);
  const double y_star = reference_optimum(s.costs);
  const double mass0 = std::accumulate(s.generator0.lambda.begin(), s.generator0.lambda.end(), 0.0);
  const EquilibriumInfo eq = equilibrium(s.costs, lap, s.params.alpha, y_star, mass0);
  const Matrix basis = n > 1 ? orthonormal_complement(n) : Matrix(1, 0);

  Trace trace;
  trace.agents = n;
  trace.horizon = s.horizon;
  trace.y_star = y_star;
  trace.rows.reserve((s.horizon + 1) * n);
  if (options.record_snapshots) trace.snapshots.reserve((s.horizon + 1) * n);

  std::vector<Matrix> x = s.x0;
  std::vector<Matrix> w = s.w0;
  std::vector<ObserverState> obs = s.observer0;
  GeneratorState gen = s.generator0;
  std::vector<Matrix> u(n);
  std::vector<double> y(n);

  for (std::size_t t = 0;; ++t) {
    const bool k2_enabled = !(s.k2_off_window && s.k2_off_window->contains(t));
    const double v = lyapunov_value(gen, s.params, eq, basis);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = output(s.plant, x[i]);
      u[i] = control_law(s.gains, gen.z[i], obs[i], k2_enabled);
      // Discrepancy against the full-information input K x + K1 y* + K2 w.
      const Matrix u_full = s.gains.K * x[i] + s.gains.K1 * y_star + s.gains.K2 * w[i];
      const Matrix xi = u[i] - u_full;
      TraceRow row;
      row.t = t;
      row.agent = i;
      row.y = y[i];
      row.z = gen.z[i];
      row.lambda = gen.lambda[i];
      row.u = scalarize(u[i]);
      row.e = y[i] - y_star;
      row.est_err = estimation_error(obs[i], x[i], w[i]);
      row.xi = scalarize(xi);
      row.V = v;
      trace.rows.push_back(row);
      if (options.record_snapshots) trace.snapshots.push_back({x[i], w[i], obs[i].x_hat, obs[i].w_hat, u[i], xi});
    }
    if (t == s.horizon) break;

    for (std::size_t i = 0; i < n; ++i) {
      obs[i] = observer_step(obs[i], s.gains, s.plant, s.exo, u[i], y[i]);
      const ExoStep ex = exo_step(s.exo, w[i]);
      x[i] = plant_step(s.plant, x[i], u[i], ex.disturbance);
      w[i] = ex.w_next;
      check_bounded(x[i], "plant state", t + 1, i);
      check_bounded(w[i], "disturbance state", t + 1, i);
      check_bounded(obs[i].x_hat, "state estimate", t + 1, i);
      check_bounded(obs[i].w_hat, "disturbance estimate", t + 1, i);
    }
    gen = generator_step(gen, s.params, lap, s.costs);
    for (std::size_t i = 0; i < n; ++i)
      if (!(std::abs(gen.z[i]) <= 1e12 && std::abs(gen.lambda[i]) <= 1e12)) {
        std::ostringstream msg;
        msg << "generator state of agent " << i << " left |.| <= 1e12 at t = " << t + 1;
        throw Error(ErrorKind::Diverged, msg.str());
      }
  }
  return trace;
}

double Metrics::max_error_between(std::size_t t0, std::size_t t1) const {
  if (max_abs_error.empty()) return 0.0;
  t1 = std::min(t1, max_abs_error.size() - 1);
  double m = 0.0;
  for (std::size_t t = t0; t <= t1; ++t) m = std::max(m, max_abs_error[t]);
  return m;
}

Metrics metrics(const Trace& trace, double y_star, std::optional<StepWindow> window) {
  Metrics m;
  const std::size_t steps = trace.horizon + 1;
  const std::size_t n = trace.agents;
  m.max_abs_error.assign(steps, 0.0);
  m.max_abs_xi.assign(steps, 0.0);
  m.spread.assign(steps, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    double lo = trace.at(t, 0).y, hi = lo;
    for (std::size_t i = 0; i < n; ++i) {
      const TraceRow& r = trace.at(t, i);
      m.max_abs_error[t] = std::max(m.max_abs_error[t], std::abs(r.y - y_star));
      m.max_abs_xi[t] = std::max(m.max_abs_xi[t], std::abs(r.xi));
      lo = std::min(lo, r.y);
      hi = std::max(hi, r.y);
    }
    m.spread[t] = hi - lo;
  }
  m.terminal_spread = m.spread.back();
  for (std::size_t i = 0; i < n; ++i) m.terminal_mean_output += trace.at(trace.horizon, i).y / static_cast<double>(n);

  m.tail_start = trace.horizon - trace.horizon / 10;
  for (std::size_t t = m.tail_start; t < steps; ++t) {
    m.tail_error = std::max(m.tail_error, m.max_abs_error[t]);
    m.tail_xi = std::max(m.tail_xi, m.max_abs_xi[t]);
  }

  if (window && window->start < window->end && window->start < steps) {
    WindowReport w;
    w.window = *window;
    const std::size_t end = std::min(window->end, steps);
    for (std::size_t t = window->start; t < end; ++t) {
      w.max_error_in_window = std::max(w.max_error_in_window, m.max_abs_error[t]);
      w.max_spread_in_window = std::max(w.max_spread_in_window, m.spread[t]);
    }
    const std::size_t len = window->end - window->start;
    const std::size_t pre_start = window->start > len ? window->start - len : 0;
    for (std::size_t t = pre_start; t < window->start; ++t) {
      w.pre_window_error = std::max(w.pre_window_error, m.max_abs_error[t]);
      w.pre_window_spread = std::max(w.pre_window_spread, m.spread[t]);
    }
    w.final_error = m.max_abs_error.back();
    m.window = w;
  }
  return m;
}

}  // namespace ooc
