#pragma once

// Parameter sweeps over the ring model and their CSV/JSON serialisation.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qring/info_measures.hpp"
#include "qring/quadrature.hpp"
#include "qring/ring_model.hpp"
#include "qring/waveforms.hpp"

namespace qring {

const char* version();

enum class Axis { nu, a, wc_ratio, r, k };

const char* axis_name(Axis axis);
std::optional<Axis> parse_axis(const std::string& text);

/// One requested output column, e.g. "s_sum" or "renyi_gamma:1.5".
struct MeasureRequest {
  std::string name;  // base name without the order suffix
  double alpha = 0.0;
  bool has_alpha = false;
  std::string label;  // column label as written
};

/// Parses a comma-separated list; throws PreconditionError on unknown names or
/// malformed orders.
std::vector<MeasureRequest> parse_measures(const std::string& text);
/// Every name that needs no order parameter.
const std::vector<std::string>& known_measures();

struct SweepSpec {
  Axis axis = Axis::nu;
  std::vector<double> grid;
  std::vector<QuantumState> states;
  double a = 20.0;
  double nu = 0.0;
  double wc_ratio = 0.0;  // omega_c / omega0
  Units units = Units::omega0_unity;
  std::vector<MeasureRequest> measures;
  quad::QuadConfig tol;

  /// Throws PreconditionError when the spec cannot be evaluated.
  void validate() const;
  /// Model parameters at one grid value of the swept axis.
  RingParams params_at(double axis_value) const;
};

struct Cell {
  double value = 0.0;
  double error = 0.0;
  Provenance source = Provenance::closed;
  bool ok = false;
  std::string message;
};

struct OutputRow {
  double axis_value = 0.0;
  QuantumState state;
  std::vector<Cell> cells;

  bool ok() const;
  std::string status() const;
};

/// Evaluates one (params, state) point for the requested columns.
std::vector<Cell> evaluate_point(const RingParams& params, const QuantumState& state,
                                 const std::vector<MeasureRequest>& measures, const quad::QuadConfig& tol);

/// Rows ordered by (grid index, state index). Rows are computed concurrently
/// on worker_count() threads.
std::vector<OutputRow> run_sweep(const SweepSpec& spec);

struct Table1Spec {
  double a = 20.0;
  int n_max = 5;
  std::vector<int> m_list = {0, 1, 2, 3, 4, 5, 10};
  quad::QuadConfig tol;
};

/// The field-independent combinations per (n, m), at nu = 0 and B = 0.
std::vector<OutputRow> run_table1(const Table1Spec& spec);
std::vector<MeasureRequest> table1_measures();

/// Worker threads: QRING_THREADS if set to a positive integer, else the
/// hardware concurrency.
int worker_count();

enum class OutputFormat { csv, json };

struct OutputHeader {
  Units units = Units::omega0_unity;
  double rel_tol = 1e-10;
  std::string extra;  // appended "key=value" pairs for the comment line
};

/// Measure table. `axis_label` empty omits the axis column.
void write_rows(std::ostream& out, OutputFormat format, const OutputHeader& header, const std::string& axis_label,
                const std::vector<MeasureRequest>& measures, const std::vector<OutputRow>& rows);

void write_waveforms(std::ostream& out, OutputFormat format, const OutputHeader& header,
                     const std::vector<GridDump>& dumps);

/// Exit status for a finished run: 0 all rows ok, 3 some failed, 4 all failed.
int exit_status(const std::vector<OutputRow>& rows);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);
/// Scientific notation with nine significant digits.
std::string format_number(double v);

}  // namespace qring
