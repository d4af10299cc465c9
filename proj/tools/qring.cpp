// qring: command-line front end for the ring model.
//
//   qring table1   [--a 20] [--n-max 5] [--m 0,1,2,3,4,5,10]
//   qring sweep    --axis nu|a|wc_ratio (--range start:stop:count | --values v1,v2,...) [--measures ...]
//   qring waveform --axis r|k (--range ... | --values ...)
//
// Exit codes: 0 success, 2 invalid arguments, 3 some rows failed, 4 all rows failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qring/errors.hpp"
#include "qring/sweeps.hpp"

namespace {

constexpr int kExitInvalid = 2;

struct Common {
  std::string units = "omega0";
  double rel_tol = 1e-10;
  std::string format = "csv";
  std::string output;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--units", c.units, "Unit convention: omega0 (omega0 = 1) or r0 (r0 = 1)")
      ->check(CLI::IsMember({"omega0", "r0"}));
  cmd->add_option("--rel-tol", c.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", c.output, "Output file (default stdout)");
}

struct GridArgs {
  std::string range;
  std::vector<double> values;
  bool log = false;
};

void add_grid(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--range", g.range, "Grid start:stop:count");
  cmd->add_option("--values", g.values, "Explicit grid values")->delimiter(',');
  cmd->add_flag("--log", g.log, "Log-spaced --range grid");
}

std::vector<double> build_grid(const GridArgs& g) {
  if (!g.range.empty() && !g.values.empty()) throw qring::PreconditionError("give either --range or --values");
  if (!g.values.empty()) {
    for (double v : g.values) {
      if (!std::isfinite(v)) throw qring::PreconditionError("grid values must be finite");
    }
    return g.values;
  }
  if (g.range.empty()) throw qring::PreconditionError("a grid is required: --range or --values");
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  char tail = 0;
  if (std::sscanf(g.range.c_str(), "%lf:%lf:%d%c", &start, &stop, &count, &tail) != 3) {
    throw qring::PreconditionError("--range must look like start:stop:count");
  }
  qring::GridSpec spec{start, stop, count, g.log};
  return spec.points();
}

qring::Units parse_units(const std::string& s) {
  return s == "r0" ? qring::Units::r0_unity : qring::Units::omega0_unity;
}

qring::quad::QuadConfig make_tol(double rel_tol) {
  qring::quad::QuadConfig cfg;
  cfg.rel_tol = rel_tol;
  return cfg;
}

std::vector<qring::QuantumState> make_states(const std::vector<int>& ns, const std::vector<int>& ms) {
  std::vector<qring::QuantumState> states;
  for (int n : ns) {
    if (n < 0) throw qring::PreconditionError("n must be >= 0");
    for (int m : ms) states.push_back({n, m});
  }
  return states;
}

int emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : 1;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) {
    std::cerr << "qring: cannot open " << c.output << "\n";
    return 1;
  }
  f << text;
  return f ? 0 : 1;
}

qring::OutputHeader header_for(const Common& c, const std::string& extra = {}) {
  return {parse_units(c.units), c.rel_tol, extra};
}

qring::OutputFormat format_of(const Common& c) {
  return c.format == "json" ? qring::OutputFormat::json : qring::OutputFormat::csv;
}

// Fixed model parameters for the header comment; `swept` is left out.
std::string fixed_params_note(double a, double nu, double wc, const std::string& swept = {}) {
  std::string s;
  const std::pair<const char*, double> items[] = {{"a", a}, {"nu", nu}, {"wc_ratio", wc}};
  for (const auto& [name, value] : items) {
    if (swept == name) continue;
    if (!s.empty()) s += ' ';
    s += std::string(name) + "=" + qring::format_number(value);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum ring in uniform and Aharonov-Bohm fields: spectrum and information measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qring::version()));

  // table1
  Common t_common;
  qring::Table1Spec t_spec;
  auto* table1 = app.add_subcommand("table1", "Field-independent measure combinations per (n, m)");
  table1->add_option("--a", t_spec.a, "Antidot strength")->check(CLI::NonNegativeNumber);
  table1->add_option("--n-max", t_spec.n_max, "Largest radial quantum number")->check(CLI::NonNegativeNumber);
  table1->add_option("--m", t_spec.m_list, "Azimuthal quantum numbers")->delimiter(',');
  add_common(table1, t_common);

  // sweep
  Common s_common;
  GridArgs s_grid;
  std::string s_axis = "nu";
  std::vector<int> s_n = {0};
  std::vector<int> s_m = {0};
  double s_a = 20.0;
  double s_nu = 0.0;
  double s_wc = 0.0;
  std::string s_measures;
  auto* sweep = app.add_subcommand("sweep", "Measures along one parameter axis");
  sweep->add_option("--axis", s_axis, "Swept parameter: nu, a or wc_ratio");
  add_grid(sweep, s_grid);
  sweep->add_option("--a", s_a, "Antidot strength");
  sweep->add_option("--nu", s_nu, "Aharonov-Bohm flux");
  sweep->add_option("--omega-c-ratio", s_wc, "omega_c / omega0");
  sweep->add_option("--n", s_n, "Radial quantum numbers")->delimiter(',');
  sweep->add_option("--m", s_m, "Azimuthal quantum numbers")->delimiter(',');
  sweep->add_option("--measures", s_measures, "Comma-separated measure list (default: all order-free measures)");
  add_common(sweep, s_common);

  // waveform
  Common w_common;
  GridArgs w_grid;
  std::string w_axis = "r";
  std::vector<int> w_n = {0};
  std::vector<int> w_m = {0};
  double w_a = 20.0;
  double w_nu = 0.0;
  double w_wc = 0.0;
  auto* waveform = app.add_subcommand("waveform", "Radial waveform on an r or k grid");
  waveform->add_option("--axis", w_axis, "r (position) or k (momentum)");
  add_grid(waveform, w_grid);
  waveform->add_option("--a", w_a, "Antidot strength");
  waveform->add_option("--nu", w_nu, "Aharonov-Bohm flux");
  waveform->add_option("--omega-c-ratio", w_wc, "omega_c / omega0");
  waveform->add_option("--n", w_n, "Radial quantum numbers")->delimiter(',');
  waveform->add_option("--m", w_m, "Azimuthal quantum numbers")->delimiter(',');
  add_common(waveform, w_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*table1) {
      t_spec.tol = make_tol(t_common.rel_tol);
      qring::RingParams check;
      check.a = t_spec.a;
      check.validate();
      const auto rows = qring::run_table1(t_spec);
      std::ostringstream out;
      qring::write_rows(out, format_of(t_common), header_for(t_common, "a=" + qring::format_number(t_spec.a)), "",
                        qring::table1_measures(), rows);
      if (emit(t_common, out.str()) != 0) return 1;
      return qring::exit_status(rows);
    }

    if (*sweep) {
      qring::SweepSpec spec;
      const auto axis = qring::parse_axis(s_axis);
      if (!axis) throw qring::PreconditionError("unknown axis: " + s_axis);
      spec.axis = *axis;
      if (sweep->count("--" + std::string(s_axis == "wc_ratio" ? "omega-c-ratio" : s_axis)) > 0) {
        throw qring::PreconditionError("--" + s_axis + " conflicts with --axis " + s_axis);
      }
      spec.grid = build_grid(s_grid);
      spec.states = make_states(s_n, s_m);
      spec.a = s_a;
      spec.nu = s_nu;
      spec.wc_ratio = s_wc;
      spec.units = parse_units(s_common.units);
      spec.tol = make_tol(s_common.rel_tol);
      if (s_measures.empty()) {
        std::string all;
        for (const auto& name : qring::known_measures()) all += (all.empty() ? "" : ",") + name;
        s_measures = all;
      }
      spec.measures = qring::parse_measures(s_measures);
      spec.validate();
      const auto rows = qring::run_sweep(spec);
      std::ostringstream out;
      qring::write_rows(out, format_of(s_common), header_for(s_common, fixed_params_note(s_a, s_nu, s_wc, s_axis)),
                        qring::axis_name(spec.axis), spec.measures, rows);
      if (emit(s_common, out.str()) != 0) return 1;
      return qring::exit_status(rows);
    }

    if (*waveform) {
      if (w_axis != "r" && w_axis != "k") throw qring::PreconditionError("waveform axis must be r or k");
      const auto grid = build_grid(w_grid);
      const auto states = make_states(w_n, w_m);
      qring::RingParams params;
      params.omega0 = qring::omega0_for(parse_units(w_common.units));
      params.a = w_a;
      params.nu = w_nu;
      params.omega_c = w_wc * params.omega0;
      params.validate();
      const qring::Space space = w_axis == "r" ? qring::Space::position : qring::Space::momentum;
      const auto cfg = make_tol(w_common.rel_tol);
      std::vector<qring::GridDump> dumps;
      for (const auto& s : states) dumps.push_back(qring::dump_grid(params, s, space, grid, cfg));
      std::ostringstream out;
      qring::write_waveforms(out, format_of(w_common),
                             header_for(w_common, std::string("space=") + qring::space_name(space) + " " +
                                                      fixed_params_note(w_a, w_nu, w_wc)),
                             dumps);
      return emit(w_common, out.str()) != 0 ? 1 : 0;
    }
  } catch (const std::invalid_argument& e) {  // includes PreconditionError
    std::cerr << "qring: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const qring::DomainError& e) {
    std::cerr << "qring: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "qring: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
