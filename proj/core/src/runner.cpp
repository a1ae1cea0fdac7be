#include "chainent/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "chainent/analysis.hpp"
#include "chainent/error.hpp"
#include "chainent/oracles.hpp"
#include "chainent/parallel.hpp"

namespace chainent {

using json = nlohmann::json;

EntropySeries run_series(const RunConfig& config, const PipelineOptions& options) {
  return entropy_series(config.chain, config.quench, config.partition(), config.grid(),
                        config.alphas, options);
}

ResultTable make_table(const RunConfig& config, const EntropySeries& series) {
  ResultTable table;
  table.config_echo = canonical_json(config);
  table.precision = config.precision;
  const std::size_t kept = config.partition().kept.size();
  table.columns.push_back("t");
  for (std::size_t j = 1; j <= kept; ++j) table.columns.push_back("xi_" + std::to_string(j));
  for (int a : series.alphas) table.columns.push_back("S_" + std::to_string(a));
  for (std::size_t i = 0; i < series.grid.count; ++i) {
    std::vector<double> row{series.grid.at(i)};
    row.insert(row.end(), series.xi[i].begin(), series.xi[i].end());
    for (const auto& values : series.values) row.push_back(values[i]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable simulate(const RunConfig& config, const PipelineOptions& options) {
  return make_table(config, run_series(config, options));
}

std::string format_value(double value, int precision) {
  if (!std::isfinite(value)) throw NumericalError("non-finite value in result table");
  if (value == 0.0) value = 0.0;  // -0 -> +0
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*e", precision - 1, value);
  return buffer;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  out << "# config: " << table.config_echo << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_value(row[c], table.precision);
    }
    out << '\n';
  }
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(table, out);
  if (!out) throw Error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Sweeps

SweepParameter SweepParameter::parse(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ConfigError("<param>", "expected key=v1,v2,... but got \"" + spec + "\"");
  }
  SweepParameter p;
  p.key = spec.substr(0, eq);
  // Split on commas outside brackets so list values such as [1,2] survive.
  std::string current;
  int depth = 0;
  for (char ch : spec.substr(eq + 1)) {
    if (ch == '[' || ch == '{') ++depth;
    if (ch == ']' || ch == '}') --depth;
    if (ch == ',' && depth == 0) {
      p.values.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  p.values.push_back(current);
  for (const auto& v : p.values) {
    if (v.empty()) throw ConfigError(p.key, "empty sweep value");
  }
  return p;
}

std::vector<SweepPoint> expand_sweep(const std::string& base_text,
                                     std::vector<SweepParameter> parameters) {
  std::sort(parameters.begin(), parameters.end(),
            [](const SweepParameter& a, const SweepParameter& b) { return a.key < b.key; });
  for (std::size_t i = 1; i < parameters.size(); ++i) {
    if (parameters[i].key == parameters[i - 1].key) {
      throw ConfigError(parameters[i].key, "swept more than once");
    }
  }
  std::vector<SweepPoint> points;
  std::vector<std::size_t> index(parameters.size(), 0);
  for (;;) {
    SweepPoint point;
    std::string text = base_text;
    for (std::size_t p = 0; p < parameters.size(); ++p) {
      const std::string& value = parameters[p].values[index[p]];
      point.assignment.emplace_back(parameters[p].key, value);
      text = with_override(text, parameters[p].key, value);
    }
    point.config_text = std::move(text);
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu.csv", points.size());
    point.file = name;
    points.push_back(std::move(point));

    std::size_t p = parameters.size();
    while (p > 0) {
      --p;
      if (++index[p] < parameters[p].values.size()) break;
      index[p] = 0;
      if (p == 0) return points;
    }
    if (parameters.empty()) return points;
  }
}

std::vector<SweepPoint> run_sweep(const std::string& base_text,
                                  std::vector<SweepParameter> parameters,
                                  const std::filesystem::path& outdir,
                                  const PipelineOptions& options) {
  std::vector<SweepPoint> points = expand_sweep(base_text, std::move(parameters));
  std::vector<RunConfig> configs;
  for (const auto& point : points) {
    try {
      configs.push_back(parse_config(point.config_text));
    } catch (const ConfigError& e) {
      std::string where;
      for (const auto& [k, v] : point.assignment) where += " " + k + "=" + v;
      throw ConfigError(e.path(), std::string(e.what()) + " (sweep point" + where + ")");
    }
  }
  std::filesystem::create_directories(outdir);
  parallel_for(points.size(), options.threads, [&](std::size_t i) {
    write_csv(simulate(configs[i]), outdir / points[i].file);
  });

  std::ofstream index(outdir / "index.csv", std::ios::binary);
  index << "file";
  if (!points.empty()) {
    for (const auto& [key, value] : points.front().assignment) index << ',' << key;
  }
  index << '\n';
  for (const auto& point : points) {
    index << point.file;
    for (const auto& [key, value] : point.assignment) {
      // Quote values that contain commas (lists).
      if (value.find(',') != std::string::npos) {
        index << ",\"" << value << '"';
      } else {
        index << ',' << value;
      }
    }
    index << '\n';
  }
  return points;
}

// ---------------------------------------------------------------------------
// Figures

Figure parse_figure(const std::string& name) {
  if (name == "fig1") return Figure::fig1;
  if (name == "fig2") return Figure::fig2;
  if (name == "fig3") return Figure::fig3;
  if (name == "fig4") return Figure::fig4;
  throw ConfigError("figure", "unknown figure \"" + name + "\" (expected fig1..fig4)");
}

std::string figure_name(Figure figure) {
  switch (figure) {
    case Figure::fig1: return "fig1";
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
  }
  return "fig";
}

namespace {

// Shortest decimal that round-trips, for file names and labels.
std::string short_number(double x) { return json(x).dump(); }

json oscillator_model(int n, double omega_f) {
  return {{"mode", "oscillator"},
          {"N", n},
          {"boundary", "periodic"},
          {"pre", {{"omega", 3.0}, {"k", 2.0}}},
          {"post", {{"omega", omega_f}, {"k", 2.5}}}};
}

std::string document(const json& model, double t_max, double dt) {
  const json doc = {{"model", model},
                    {"partition", {{"traced", "second_half"}}},
                    {"time", {{"t_max", t_max}, {"dt", dt}}},
                    {"entropy", {{"alphas", {1, 2}}}}};
  return doc.dump();
}

constexpr int kScalingSizes[] = {4, 6, 10, 16, 20};

}  // namespace

std::vector<Curve> figure_curves(Figure figure, const GridOverride& grid) {
  const double dt = grid.dt.value_or(0.01);
  const double default_t = (figure == Figure::fig1 || figure == Figure::fig2) ? 100.0 : 200.0;
  const double t_max = grid.t_max.value_or(default_t);
  const std::string prefix = figure_name(figure);
  std::vector<Curve> curves;
  switch (figure) {
    case Figure::fig1:
      for (double w : {2.15, 2.06, 2.01}) {
        const json model = {
            {"mode", "bose_hubbard"}, {"omega_bh_i", 3.0}, {"omega_bh_f", w}, {"J", 2.0}};
        curves.push_back({prefix + "_omega_bh_f_" + short_number(w),
                          "omega_BH(f) = " + short_number(w), document(model, t_max, dt)});
      }
      break;
    case Figure::fig2:
      for (double w : {0.3, 0.1, 0.01}) {
        curves.push_back({prefix + "_omega_f_" + short_number(w), "omega(f) = " + short_number(w),
                          document(oscillator_model(4, w), t_max, dt)});
      }
      break;
    case Figure::fig3:
    case Figure::fig4:
      for (int n : kScalingSizes) {
        curves.push_back({prefix + "_N" + std::to_string(n), "N = " + std::to_string(n),
                          document(oscillator_model(n, 0.01), t_max, dt)});
      }
      break;
  }
  return curves;
}

namespace {

void write_plot_script(Figure figure, const std::vector<Curve>& curves,
                       const std::vector<std::size_t>& s1_columns,
                       const std::filesystem::path& path) {
  std::ofstream gp(path, std::ios::binary);
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n";
  const bool scaled = figure == Figure::fig4;
  gp << "set ylabel '" << (scaled ? "S_1 / ln N" : "S_1") << "'\n";
  gp << "set terminal pngcairo size 900,600\n"
     << "set output '" << figure_name(figure) << ".png'\n"
     << "plot ";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const std::size_t col = s1_columns[c] + 1;  // gnuplot columns are 1-based
    gp << (c ? ", \\\n     " : "") << "'" << curves[c].name << ".csv' using 1:";
    if (scaled) {
      const int n = kScalingSizes[c];
      gp << "($" << col << "/log(" << n << "))";
    } else {
      gp << col;
    }
    gp << " with lines title '" << curves[c].label << "'";
  }
  gp << '\n';
}

void write_scaling(const std::vector<ResultTable>& tables, const std::vector<std::size_t>& s1,
                   const std::filesystem::path& path) {
  std::vector<std::vector<double>> all;
  std::vector<int> sizes;
  for (std::size_t c = 0; c < tables.size(); ++c) {
    std::vector<double> v;
    for (const auto& row : tables[c].rows) v.push_back(row[s1[c]]);
    all.push_back(std::move(v));
    sizes.push_back(kScalingSizes[c]);
  }
  // Near-critical collapse set (N >= 10) and the full set.
  std::vector<std::vector<double>> large(all.begin() + 2, all.end());
  std::vector<int> large_sizes(sizes.begin() + 2, sizes.end());
  const ScalingFit fit = fit_scaling(large_sizes, large);
  const ScalingFit fit_all = fit_scaling(sizes, all);

  ResultTable table;
  table.config_echo = json{{"version", library_version()},
                           {"fit", "S_1 = c(t) ln N + d(t)"},
                           {"sizes", large_sizes},
                           {"all_sizes", sizes}}
                          .dump();
  table.columns = {"t", "c", "d", "residual", "relative_spread", "relative_spread_all"};
  for (std::size_t i = 0; i < fit.slope.size(); ++i) {
    table.rows.push_back({tables.front().rows[i][0], fit.slope[i], fit.intercept[i],
                          fit.residual[i], fit.relative_spread[i], fit_all.relative_spread[i]});
  }
  write_csv(table, path);
}

}  // namespace

std::vector<std::filesystem::path> run_figure(Figure figure, const std::filesystem::path& outdir,
                                              const GridOverride& grid,
                                              const PipelineOptions& options) {
  const std::vector<Curve> curves = figure_curves(figure, grid);
  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> written;
  std::vector<ResultTable> tables;
  std::vector<std::size_t> s1_columns;
  for (const Curve& curve : curves) {
    const RunConfig config = parse_config(curve.config_text);
    ResultTable table = simulate(config, options);
    const auto s1 = std::find(table.columns.begin(), table.columns.end(), "S_1");
    s1_columns.push_back(static_cast<std::size_t>(s1 - table.columns.begin()));
    const auto path = outdir / (curve.name + ".csv");
    write_csv(table, path);
    written.push_back(path);
    tables.push_back(std::move(table));
  }
  if (figure == Figure::fig4) {
    const auto path = outdir / "fig4_scaling.csv";
    write_scaling(tables, s1_columns, path);
    written.push_back(path);
  }
  const auto script = outdir / (figure_name(figure) + ".gp");
  write_plot_script(figure, curves, s1_columns, script);
  written.push_back(script);
  return written;
}

// ---------------------------------------------------------------------------
// Verification

bool VerifyReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.passed; });
}

std::vector<Curve> default_verification_curves() {
  const GridOverride grid{100.0 / 999.0, 100.0};
  std::vector<Curve> curves;
  for (Figure f : {Figure::fig1, Figure::fig2, Figure::fig3}) {
    for (Curve& c : figure_curves(f, grid)) curves.push_back(std::move(c));
  }
  return curves;
}

VerifyReport verify(const std::vector<Curve>& curves, const PipelineOptions& options,
                    double tolerance) {
  VerifyReport report;
  report.tolerance = tolerance;
  for (const Curve& curve : curves) {
    RunConfig config = parse_config(curve.config_text);
    config.alphas = {1, 2};
    const EntropySeries primary = run_series(config, options);
    const EntropySeries oracle = covariance_entropy_series(
        config.chain, config.quench, config.partition(), config.grid(), config.alphas, options);
    VerifyEntry entry;
    entry.name = curve.name;
    for (std::size_t i = 0; i < primary.grid.count; ++i) {
      entry.max_deviation_s1 = std::max(
          entry.max_deviation_s1, std::abs(primary.entropy(1)[i] - oracle.entropy(1)[i]));
      entry.max_deviation_s2 = std::max(
          entry.max_deviation_s2, std::abs(primary.entropy(2)[i] - oracle.entropy(2)[i]));
    }
    entry.passed = entry.max_deviation_s1 < tolerance && entry.max_deviation_s2 < tolerance;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace chainent
