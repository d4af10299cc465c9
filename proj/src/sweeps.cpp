#include "qring/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "qring/errors.hpp"

namespace qring {

namespace {

const std::vector<std::string> kPlainMeasures = {
    "energy", "current", "magnetization", "s_rho", "s_gamma", "s_sum", "i_rho",     "i_gamma", "i_prod",
    "o_rho",  "o_gamma", "o_prod",        "cgl_rho", "cgl_gamma", "r2", "k2", "r2k2"};

const std::vector<std::string> kOrderMeasures = {"renyi_rho", "renyi_gamma", "tsallis_rho", "tsallis_gamma"};

Cell to_cell(const MeasureValue& v) { return {v.value, v.error, v.source, v.ok, v.message}; }

Provenance merge(Provenance x, Provenance y) {
  return (x == Provenance::closed && y == Provenance::closed) ? Provenance::closed : Provenance::numeric;
}

Cell combine_sum(const char* name, const MeasureValue& x, const MeasureValue& y) {
  Cell c;
  c.source = merge(x.source, y.source);
  if (!x.ok || !y.ok) {
    c.message = std::string(name) + ": depends on a failed component";
    return c;
  }
  c.value = x.value + y.value;
  c.error = x.error + y.error;
  c.ok = std::isfinite(c.value);
  return c;
}

Cell combine_product(const char* name, const MeasureValue& x, const MeasureValue& y) {
  Cell c;
  c.source = merge(x.source, y.source);
  if (!x.ok || !y.ok) {
    c.message = std::string(name) + ": depends on a failed component";
    return c;
  }
  c.value = x.value * y.value;
  c.error = std::abs(x.error * y.value) + std::abs(y.error * x.value);
  c.ok = std::isfinite(c.value);
  if (!c.ok) c.message = std::string(name) + ": non-finite value";
  return c;
}

Cell bundle_cell(const std::string& name, const MeasureSet& ms) {
  if (name == "energy") return to_cell(ms.energy);
  if (name == "current") return to_cell(ms.current);
  if (name == "magnetization") return to_cell(ms.magnetization);
  if (name == "s_rho") return to_cell(ms.s_rho);
  if (name == "s_gamma") return to_cell(ms.s_gamma);
  if (name == "s_sum") return combine_sum("s_sum", ms.s_rho, ms.s_gamma);
  if (name == "i_rho") return to_cell(ms.i_rho);
  if (name == "i_gamma") return to_cell(ms.i_gamma);
  if (name == "i_prod") return combine_product("i_prod", ms.i_rho, ms.i_gamma);
  if (name == "o_rho") return to_cell(ms.o_rho);
  if (name == "o_gamma") return to_cell(ms.o_gamma);
  if (name == "o_prod") return combine_product("o_prod", ms.o_rho, ms.o_gamma);
  if (name == "cgl_rho") return to_cell(ms.cgl_rho);
  if (name == "cgl_gamma") return to_cell(ms.cgl_gamma);
  if (name == "r2") return to_cell(ms.r2);
  if (name == "k2") return to_cell(ms.k2);
  if (name == "r2k2") return combine_product("r2k2", ms.r2, ms.k2);
  throw PreconditionError("unknown measure: " + name);
}

// Measures with a closed form for every orbital; evaluated without building
// the full bundle. Same cell semantics as measure_bundle.
std::optional<Cell> direct_cell(const std::string& name, const RingParams& params, const QuantumState& state) {
  using Fn = double (*)(const RingParams&, const QuantumState&);
  static const std::pair<const char*, Fn> table[] = {
      {"energy", &energy}, {"current", &persistent_current}, {"magnetization", &magnetization},
      {"i_rho", &fisher_rho}, {"r2", &r2_moment},          {"k2", &k2_moment_closed}};
  for (const auto& [key, fn] : table) {
    if (name != key) continue;
    Cell cell;
    cell.source = Provenance::closed;
    try {
      cell.value = fn(params, state);
      cell.ok = std::isfinite(cell.value);
      if (!cell.ok) cell.message = name + ": non-finite value";
    } catch (const std::exception& ex) {
      cell.value = std::numeric_limits<double>::quiet_NaN();
      cell.message = name + ": " + ex.what();
    }
    return cell;
  }
  return std::nullopt;
}

// Runs task(i) for i in [0, count) on the worker pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string header_line(const OutputHeader& h) {
  std::string line = std::string("# qring ") + version() + " units=" + units_name(h.units) +
                     " tol=" + format_number(h.rel_tol);
  if (!h.extra.empty()) line += " " + h.extra;
  return line;
}

// JSON has no inf/nan literals; those go out as the CSV spellings.
nlohmann::ordered_json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return v;
}

}  // namespace

const char* version() {
#ifdef QRING_VERSION
  return QRING_VERSION;
#else
  return "0.0.0";
#endif
}

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::nu: return "nu";
    case Axis::a: return "a";
    case Axis::wc_ratio: return "wc_ratio";
    case Axis::r: return "r";
    case Axis::k: return "k";
  }
  return "?";
}

std::optional<Axis> parse_axis(const std::string& text) {
  for (Axis a : {Axis::nu, Axis::a, Axis::wc_ratio, Axis::r, Axis::k}) {
    if (text == axis_name(a)) return a;
  }
  return std::nullopt;
}

const std::vector<std::string>& known_measures() { return kPlainMeasures; }

std::vector<MeasureRequest> parse_measures(const std::string& text) {
  std::vector<MeasureRequest> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) throw PreconditionError("empty measure name in list");
    MeasureRequest req;
    req.label = item;
    const std::size_t colon = item.find(':');
    req.name = item.substr(0, colon);
    if (colon != std::string::npos) {
      if (std::find(kOrderMeasures.begin(), kOrderMeasures.end(), req.name) == kOrderMeasures.end()) {
        throw PreconditionError("measure takes no order: " + item);
      }
      const std::string order = item.substr(colon + 1);
      char* end = nullptr;
      req.alpha = std::strtod(order.c_str(), &end);
      if (order.empty() || end != order.c_str() + order.size() || !std::isfinite(req.alpha)) {
        throw PreconditionError("malformed order in " + item);
      }
      if (!(req.alpha >= 0.5 && req.alpha <= 4.0) || req.alpha == 1.0) {
        throw PreconditionError("order must lie in [0.5, 4] and differ from 1: " + item);
      }
      req.has_alpha = true;
    } else if (std::find(kPlainMeasures.begin(), kPlainMeasures.end(), req.name) == kPlainMeasures.end()) {
      if (std::find(kOrderMeasures.begin(), kOrderMeasures.end(), req.name) != kOrderMeasures.end()) {
        throw PreconditionError("measure needs an order, e.g. " + req.name + ":2");
      }
      throw PreconditionError("unknown measure: " + item);
    }
    out.push_back(req);
  }
  return out;
}

void SweepSpec::validate() const {
  if (axis == Axis::r || axis == Axis::k) throw PreconditionError("sweep axis must be nu, a or wc_ratio");
  if (grid.empty()) throw PreconditionError("sweep grid is empty");
  if (states.empty()) throw PreconditionError("no states requested");
  if (measures.empty()) throw PreconditionError("no measures requested");
  tol.validate();
  for (const auto& s : states) {
    if (s.n < 0) throw PreconditionError("n must be >= 0");
  }
  for (double v : grid) params_at(v).validate();
}

RingParams SweepSpec::params_at(double axis_value) const {
  RingParams p;
  p.omega0 = omega0_for(units);
  p.a = axis == Axis::a ? axis_value : a;
  p.nu = axis == Axis::nu ? axis_value : nu;
  const double ratio = axis == Axis::wc_ratio ? axis_value : wc_ratio;
  if (!(ratio >= 0.0)) throw PreconditionError("wc_ratio must be >= 0");
  p.omega_c = ratio * p.omega0;
  return p;
}

bool OutputRow::ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.ok; });
}

std::string OutputRow::status() const {
  std::string s;
  for (const auto& c : cells) {
    if (c.ok) continue;
    if (!s.empty()) s += "; ";
    s += c.message;
  }
  return s.empty() ? "ok" : "failed: " + s;
}

std::vector<Cell> evaluate_point(const RingParams& params, const QuantumState& state,
                                 const std::vector<MeasureRequest>& measures, const quad::QuadConfig& tol) {
  std::optional<MeasureSet> bundle;
  std::optional<OrbitalAnalysis> analysis;
  std::string setup_error;
  std::vector<Cell> cells;
  cells.reserve(measures.size());
  for (const auto& req : measures) {
    Cell cell;
    try {
      if (!req.has_alpha) {
        if (auto direct = direct_cell(req.name, params, state)) {
          cells.push_back(std::move(*direct));
          continue;
        }
        if (!bundle) bundle = measure_bundle(params, state, tol);
        cell = bundle_cell(req.name, *bundle);
      } else {
        if (!analysis) analysis.emplace(params, state, tol);
        const Space space = req.name.ends_with("_rho") ? Space::position : Space::momentum;
        const Estimate e = req.name.starts_with("renyi") ? analysis->renyi(space, req.alpha)
                                                         : analysis->tsallis(space, req.alpha);
        cell = {e.value, e.error, Provenance::numeric, std::isfinite(e.value), ""};
        if (!cell.ok) cell.message = req.label + ": divergent integral";
      }
    } catch (const std::exception& ex) {
      cell.ok = false;
      cell.message = req.label + ": " + ex.what();
    }
    cells.push_back(cell);
  }
  return cells;
}

int worker_count() {
  if (const char* env = std::getenv("QRING_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<OutputRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t per_point = spec.states.size();
  std::vector<OutputRow> rows(spec.grid.size() * per_point);
  parallel_for(rows.size(), [&](std::size_t i) {
    OutputRow& row = rows[i];
    row.axis_value = spec.grid[i / per_point];
    row.state = spec.states[i % per_point];
    row.cells = evaluate_point(spec.params_at(row.axis_value), row.state, spec.measures, spec.tol);
  });
  return rows;
}

std::vector<MeasureRequest> table1_measures() { return parse_measures("s_sum,i_prod,o_prod,cgl_rho,cgl_gamma"); }

std::vector<OutputRow> run_table1(const Table1Spec& spec) {
  if (spec.n_max < 0) throw PreconditionError("n_max must be >= 0");
  if (spec.m_list.empty()) throw PreconditionError("m list is empty");
  spec.tol.validate();
  RingParams params;
  params.a = spec.a;
  params.validate();
  const auto measures = table1_measures();
  const std::size_t per_n = spec.m_list.size();
  std::vector<OutputRow> rows((spec.n_max + 1) * per_n);
  parallel_for(rows.size(), [&](std::size_t i) {
    OutputRow& row = rows[i];
    row.axis_value = spec.a;
    row.state = {static_cast<int>(i / per_n), spec.m_list[i % per_n]};
    row.cells = evaluate_point(params, row.state, measures, spec.tol);
  });
  return rows;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void write_rows(std::ostream& out, OutputFormat format, const OutputHeader& header, const std::string& axis_label,
                const std::vector<MeasureRequest>& measures, const std::vector<OutputRow>& rows) {
  if (format == OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["qring"] = version();
    doc["units"] = units_name(header.units);
    doc["tol"] = header.rel_tol;
    if (!header.extra.empty()) doc["params"] = header.extra;
    if (!axis_label.empty()) doc["axis"] = axis_label;
    auto& arr = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json r;
      if (!axis_label.empty()) r[axis_label] = json_number(row.axis_value);
      r["n"] = row.state.n;
      r["m"] = row.state.m;
      auto m = nlohmann::ordered_json::object();
      for (std::size_t j = 0; j < measures.size(); ++j) {
        const Cell& c = row.cells[j];
        m[measures[j].label] = {{"value", c.ok ? json_number(c.value) : nullptr},
                                {"source", provenance_name(c.source)},
                                {"error", json_number(c.error)}};
      }
      r["measures"] = std::move(m);
      r["status"] = row.status();
      arr.push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
    return;
  }

  out << header_line(header) << '\n';
  std::string line;
  if (!axis_label.empty()) line += csv_field(axis_label) + ",";
  line += "n,m";
  for (const auto& m : measures) {
    line += "," + csv_field(m.label) + "," + csv_field(m.label + "_src") + "," + csv_field(m.label + "_err");
  }
  out << line << ",status\n";
  for (const auto& row : rows) {
    line.clear();
    if (!axis_label.empty()) line += format_number(row.axis_value) + ",";
    line += std::to_string(row.state.n) + "," + std::to_string(row.state.m);
    for (const auto& c : row.cells) {
      line += "," + (c.ok ? format_number(c.value) : std::string());
      line += std::string(",") + provenance_name(c.source);
      line += "," + format_number(c.error);
    }
    out << line << "," << csv_field(row.status()) << '\n';
  }
}

void write_waveforms(std::ostream& out, OutputFormat format, const OutputHeader& header,
                     const std::vector<GridDump>& dumps) {
  if (format == OutputFormat::json) {
    nlohmann::ordered_json doc;
    doc["qring"] = version();
    doc["units"] = units_name(header.units);
    doc["tol"] = header.rel_tol;
    if (!header.extra.empty()) doc["params"] = header.extra;
    auto& arr = doc["waveforms"] = nlohmann::ordered_json::array();
    for (const auto& d : dumps) {
      nlohmann::ordered_json w;
      w["space"] = space_name(d.space);
      w["n"] = d.state.n;
      w["m"] = d.state.m;
      w["a"] = d.params.a;
      w["nu"] = d.params.nu;
      w["omega0"] = d.params.omega0;
      w["omega_c"] = d.params.omega_c;
      auto axis = nlohmann::ordered_json::array();
      auto values = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < d.axis.size(); ++i) {
        axis.push_back(json_number(d.axis[i]));
        values.push_back(json_number(d.values[i]));
      }
      w["axis"] = std::move(axis);
      w["values"] = std::move(values);
      arr.push_back(std::move(w));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << header_line(header) << '\n';
  const bool momentum = !dumps.empty() && dumps.front().space == Space::momentum;
  out << (momentum ? "k" : "r") << ",n,m," << (momentum ? "K" : "R") << '\n';
  for (const auto& d : dumps) {
    for (std::size_t i = 0; i < d.axis.size(); ++i) {
      out << format_number(d.axis[i]) << ',' << d.state.n << ',' << d.state.m << ',' << format_number(d.values[i])
          << '\n';
    }
  }
}

int exit_status(const std::vector<OutputRow>& rows) {
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const OutputRow& r) { return !r.ok(); });
  if (failed == 0) return 0;
  if (failed == static_cast<long>(rows.size())) return 4;
  return 3;
}

}  // namespace qring
