#include "ooc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ooc/scenario.hpp"
#include "ooc/sim.hpp"
#include "ooc/trace_io.hpp"

namespace ooc {
namespace fs = std::filesystem;

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::UnknownSuite:
      return 1;
    case ErrorKind::Diverged:
      return 3;
    default:
      return 2;
  }
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void print_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << name << " (" << m.rows() << "x" << m.cols() << ") = [";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) out << "; ";
    for (std::size_t k = 0; k < m.cols(); ++k) out << (k ? ", " : "") << num(m(i, k));
  }
  out << "]\n";
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

void print_regulator(std::ostream& out, const AssumptionReport& rep) {
  out << "# regulator solution\n";
  print_matrix(out, "X1", rep.regulator.X1);
  print_matrix(out, "U1", rep.regulator.U1);
  print_matrix(out, "X2", rep.regulator.X2);
  print_matrix(out, "U2", rep.regulator.U2);
  out << "residual.setpoint_state = " << num(rep.residuals.setpoint_state) << '\n'
      << "residual.setpoint_output = " << num(rep.residuals.setpoint_output) << '\n'
      << "residual.disturbance_state = " << num(rep.residuals.disturbance_state) << '\n'
      << "residual.disturbance_output = " << num(rep.residuals.disturbance_output) << '\n';
}

void print_gains(std::ostream& out, const Scenario& s, const AssumptionReport& rep) {
  out << "# gains\n";
  print_matrix(out, "K", s.gains.K);
  print_matrix(out, "L1", s.gains.L1);
  print_matrix(out, "L2", s.gains.L2);
  print_matrix(out, "K1", s.gains.K1);
  print_matrix(out, "K2", s.gains.K2);
  out << "K.source = " << (rep.feedback_synthesized ? "riccati" : "scenario") << '\n'
      << "L.source = " << (rep.observer_synthesized ? "riccati" : "scenario") << '\n'
      << "# schur certificates (min Cholesky pivot of the Lyapunov solution)\n"
      << "A+BK.schur = " << yes_no(rep.feedback_certificate.schur) << '\n'
      << "A+BK.min_pivot = " << num(rep.feedback_certificate.min_pivot) << '\n'
      << "observer_error.schur = " << yes_no(rep.observer_certificate.schur) << '\n'
      << "observer_error.min_pivot = " << num(rep.observer_certificate.min_pivot) << '\n'
      << "# generator\n"
      << "alpha = " << num(s.params.alpha) << '\n'
      << "beta = " << num(s.params.beta) << '\n'
      << "gamma = " << num(s.params.gamma) << '\n';
}

void print_report(std::ostream& out, const AssumptionReport& rep) {
  out << "# assumption checks\n"
      << "graph.strongly_connected_weight_balanced = " << yes_no(rep.graph_ok) << '\n'
      << "graph.lambda2 = " << num(rep.spectrum.lambda2) << '\n'
      << "graph.lambdaN = " << num(rep.spectrum.lambdaN) << '\n'
      << "graph.laplacian_norm = " << num(rep.spectrum.laplacian_norm) << '\n'
      << "costs.bounds_hold = " << yes_no(rep.costs_ok) << '\n'
      << "plant.controllable = " << yes_no(rep.minimality.controllable) << '\n'
      << "plant.observable = " << yes_no(rep.minimality.observable) << '\n'
      << "exosystem.no_stable_modes = " << yes_no(rep.exo_no_stable_modes) << '\n'
      << "composite.observable = " << yes_no(rep.composite_observable) << '\n'
      << "generator.meets_sufficient_condition = " << yes_no(rep.params_meet_condition) << '\n';
  for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
}

double max_mass_drift(const Trace& tr) {
  auto mass = [&](std::size_t t) {
    double m = 0.0;
    for (std::size_t i = 0; i < tr.agents; ++i) m += tr.at(t, i).lambda;
    return m;
  };
  const double m0 = mass(0);
  double drift = 0.0;
  for (std::size_t t = 1; t <= tr.horizon; ++t) drift = std::max(drift, std::abs(mass(t) - m0));
  return drift;
}

void write_summary(std::ostream& out, const Trace& tr, const Metrics& m) {
  out << "agents = " << tr.agents << '\n'
      << "horizon = " << tr.horizon << '\n'
      << "y_star = " << num(tr.y_star) << '\n'
      << "terminal_mean_output = " << num(m.terminal_mean_output) << '\n'
      << "terminal_spread = " << num(m.terminal_spread) << '\n'
      << "terminal_error = " << num(m.max_abs_error.back()) << '\n'
      << "tail_start = " << m.tail_start << '\n'
      << "tail_max_error = " << num(m.tail_error) << '\n'
      << "tail_max_xi = " << num(m.tail_xi) << '\n'
      << "dual_mass_drift = " << num(max_mass_drift(tr)) << '\n';
  if (m.window) {
    const WindowReport& w = *m.window;
    out << "k2_off_window = [" << w.window.start << ", " << w.window.end << ")\n"
        << "window_max_error = " << num(w.max_error_in_window) << '\n'
        << "window_max_spread = " << num(w.max_spread_in_window) << '\n'
        << "pre_window_max_error = " << num(w.pre_window_error) << '\n'
        << "pre_window_max_spread = " << num(w.pre_window_spread) << '\n'
        << "final_error = " << num(w.final_error) << '\n';
  }
}

template <class F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write '" + path.string() + "'");
  body(out);
}

struct RunArgs {
  std::string scenario;
  std::string out_dir;
  std::optional<std::size_t> horizon;
  std::vector<std::string> overrides;
  std::string dump_canonical;
};

void dump(const ScenarioFile& f, const std::string& path) {
  if (path.empty()) return;
  write_file(path, [&](std::ostream& o) { o << to_json(f).dump(2) << '\n'; });
}

ScenarioFile load(const RunArgs& a) {
  nlohmann::json doc = read_json_file(a.scenario);
  for (const auto& o : a.overrides) apply_override(doc, o);
  ScenarioFile f = parse_scenario(doc);
  if (a.horizon) f.horizon = *a.horizon;
  return f;
}

void simulate_and_write(const ScenarioFile& f, const fs::path& dir, bool plots, std::ostream& out, std::ostream& err) {
  BuiltScenario built = build_scenario(f);
  for (const auto& w : built.report.warnings) err << "warning: " << w << '\n';
  const Trace tr = simulate(built.scenario);
  const Metrics m = metrics(tr, tr.y_star, built.scenario.k2_off_window);

  fs::create_directories(dir);
  write_trace_csv(dir / "trace.csv", tr);
  write_file(dir / "gains.txt", [&](std::ostream& o) {
    print_regulator(o, built.report);
    print_gains(o, built.scenario, built.report);
  });
  write_file(dir / "summary.txt", [&](std::ostream& o) { write_summary(o, tr, m); });
  if (plots) {
    write_series_csv(dir / "generator_z.csv", tr, Series::GeneratorZ);
    write_series_csv(dir / "generator_lambda.csv", tr, Series::GeneratorLambda);
    write_series_csv(dir / "outputs_y.csv", tr, Series::OutputY);
  }
  out << "y* = " << num(tr.y_star) << ", terminal mean output " << num(m.terminal_mean_output) << ", spread "
      << num(m.terminal_spread) << "\nwrote " << dir.string() << '\n';
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"optimal output consensus simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "synthesize missing gains and simulate a scenario");
  run->add_option("--scenario", run_args.scenario, "scenario JSON file")->required();
  run->add_option("--out", run_args.out_dir, "output directory")->required();
  run->add_option("--horizon", run_args.horizon, "override sim.horizon");
  run->add_option("--override", run_args.overrides, "dotted.key=value edit applied before parsing");
  run->add_option("--dump-canonical", run_args.dump_canonical, "write the canonical scenario JSON here");

  std::string paper_out, paper_dump;
  auto* paper = app.add_subcommand("paper-example", "run the built-in four-agent benchmark");
  paper->add_option("--out", paper_out, "output directory")->required();
  paper->add_option("--dump-canonical", paper_dump, "write the canonical scenario JSON here");

  RunArgs syn_args;
  auto* syn = app.add_subcommand("synthesize", "solve the regulator equations and design gains");
  syn->add_option("--scenario", syn_args.scenario, "scenario JSON file")->required();
  syn->add_option("--override", syn_args.overrides, "dotted.key=value edit applied before parsing");
  syn->add_option("--dump-canonical", syn_args.dump_canonical, "write the canonical scenario JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const ScenarioFile f = load(run_args);
      dump(f, run_args.dump_canonical);
      simulate_and_write(f, run_args.out_dir, false, out, err);
    } else if (*paper) {
      const ScenarioFile f = paper_scenario();
      dump(f, paper_dump);
      simulate_and_write(f, paper_out, true, out, err);
    } else if (*syn) {
      const ScenarioFile f = load(syn_args);
      dump(f, syn_args.dump_canonical);
      const BuiltScenario built = build_scenario(f);
      print_regulator(out, built.report);
      print_gains(out, built.scenario, built.report);
      print_report(out, built.report);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ooc
