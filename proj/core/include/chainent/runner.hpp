#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chainent/config.hpp"
#include "chainent/entanglement.hpp"

namespace chainent {

/// Rows of (t, xi_1..xi_m, S_alpha...) with the canonical config echo.
struct ResultTable {
  std::string config_echo;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  int precision = 12;
};

EntropySeries run_series(const RunConfig& config, const PipelineOptions& options = {});
ResultTable make_table(const RunConfig& config, const EntropySeries& series);
ResultTable simulate(const RunConfig& config, const PipelineOptions& options = {});

/// `precision` significant digits in scientific notation; -0 prints as 0.
std::string format_value(double value, int precision);

/// "# config: <echo>", the column header, then one line per row, '\n' endings.
void write_csv(const ResultTable& table, std::ostream& out);
void write_csv(const ResultTable& table, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sweeps

/// `key=v1,v2,...` with a dotted config key and JSON values.
struct SweepParameter {
  std::string key;
  std::vector<std::string> values;

  static SweepParameter parse(const std::string& spec);
};

struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> assignment;  // sorted by key
  std::string config_text;
  std::string file;  // point_000.csv, ...
};

/// Cartesian product in sorted-key order; the last key varies fastest.
std::vector<SweepPoint> expand_sweep(const std::string& base_text,
                                     std::vector<SweepParameter> parameters);

/// Writes one CSV per point and index.csv (file, key=value...) into `outdir`.
/// Points run concurrently; file contents do not depend on the schedule.
std::vector<SweepPoint> run_sweep(const std::string& base_text,
                                  std::vector<SweepParameter> parameters,
                                  const std::filesystem::path& outdir,
                                  const PipelineOptions& options = {});

// ---------------------------------------------------------------------------
// Figures and verification

enum class Figure { fig1, fig2, fig3, fig4 };

Figure parse_figure(const std::string& name);
std::string figure_name(Figure figure);

struct Curve {
  std::string name;         // file stem
  std::string label;        // legend entry
  std::string config_text;  // complete run document
};

struct GridOverride {
  std::optional<double> dt;
  std::optional<double> t_max;
};

/// Run documents of every curve of a figure with its default grid (dt 0.01;
/// t_max 100 for fig1/fig2 and 200 for fig3/fig4), alphas {1, 2}.
std::vector<Curve> figure_curves(Figure figure, const GridOverride& grid = {});

/// One CSV per curve plus <fig>.gp (gnuplot). fig4 also writes
/// fig4_scaling.csv with the per-time ln N fit.
std::vector<std::filesystem::path> run_figure(Figure figure, const std::filesystem::path& outdir,
                                              const GridOverride& grid = {},
                                              const PipelineOptions& options = {});

struct VerifyEntry {
  std::string name;
  double max_deviation_s1 = 0.0;
  double max_deviation_s2 = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  double tolerance = 1e-8;

  bool passed() const;
};

/// The curves of figs. 1-3 on 1000 uniform points in [0, 100].
std::vector<Curve> default_verification_curves();

/// Ermakov-path S_1, S_2 against the covariance oracle on each curve's grid.
VerifyReport verify(const std::vector<Curve>& curves, const PipelineOptions& options = {},
                    double tolerance = 1e-8);

}  // namespace chainent
