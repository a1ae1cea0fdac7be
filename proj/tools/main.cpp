#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chainent/config.hpp"
#include "chainent/error.hpp"
#include "chainent/runner.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kFailure = 2 };

struct Common {
  std::string config;
  std::string output;
  unsigned threads = 1;
  std::optional<double> dt;
  std::optional<double> t_max;
};

void add_common(CLI::App* cmd, Common& c, bool with_config = true) {
  if (with_config) cmd->add_option("--config", c.config, "JSON run document");
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
  cmd->add_option("--dt", c.dt, "override time.dt");
  cmd->add_option("--t-max", c.t_max, "override time.t_max");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw chainent::ConfigError("--config", "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string number(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

std::string config_text(const Common& c) {
  if (c.config.empty()) throw chainent::ConfigError("--config", "a config file is required");
  std::string text = read_text(c.config);
  if (c.dt) text = chainent::with_override(text, "time.dt", number(*c.dt));
  if (c.t_max) text = chainent::with_override(text, "time.t_max", number(*c.t_max));
  return text;
}

int simulate(const Common& c) {
  const chainent::RunConfig config = chainent::parse_config(config_text(c));
  const chainent::ResultTable table = chainent::simulate(config, {c.threads});
  const std::string path = !c.output.empty() ? c.output : config.output_path;
  if (path.empty()) {
    chainent::write_csv(table, std::cout);
  } else {
    chainent::write_csv(table, std::filesystem::path(path));
  }
  return kOk;
}

int sweep(const Common& c, const std::vector<std::string>& params, const std::string& outdir) {
  std::vector<chainent::SweepParameter> parsed;
  for (const auto& p : params) parsed.push_back(chainent::SweepParameter::parse(p));
  const auto points = chainent::run_sweep(config_text(c), parsed, outdir, {c.threads});
  std::cout << "wrote " << points.size() << " runs to " << outdir << '\n';
  return kOk;
}

int figure(const Common& c, const std::string& name, const std::string& outdir) {
  const auto written =
      chainent::run_figure(chainent::parse_figure(name), outdir, {c.dt, c.t_max}, {c.threads});
  for (const auto& path : written) std::cout << path.string() << '\n';
  return kOk;
}

int verify(const Common& c, double tolerance) {
  std::vector<chainent::Curve> curves;
  if (c.config.empty()) {
    curves = chainent::default_verification_curves();
  } else {
    curves.push_back({std::filesystem::path(c.config).stem().string(), "", config_text(c)});
  }
  const chainent::VerifyReport report = chainent::verify(curves, {c.threads}, tolerance);
  for (const auto& e : report.entries) {
    std::printf("%-24s max|dS_1| = %.3e  max|dS_2| = %.3e  %s\n", e.name.c_str(),
                e.max_deviation_s1, e.max_deviation_s2, e.passed ? "ok" : "FAIL");
  }
  std::printf("%s (tolerance %.1e)\n", report.passed() ? "all runs agree" : "deviation too large",
              report.tolerance);
  return report.passed() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement dynamics of quenched harmonic chains"};
  app.set_version_flag("--version", chainent::library_version());
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> params;
  std::string outdir = ".";
  std::string figure_id;
  double tolerance = 1e-8;

  auto* sim = app.add_subcommand("simulate", "run one configuration and write a CSV");
  add_common(sim, common);
  sim->add_option("--output", common.output, "CSV path (default: output.path or stdout)");

  auto* swp = app.add_subcommand("sweep", "run the cartesian product of parameter lists");
  add_common(swp, common);
  swp->add_option("--param", params, "dotted.key=v1,v2,... (repeatable)")->required();
  swp->add_option("--outdir", outdir, "output directory");

  auto* fig = app.add_subcommand("figure", "reproduce a figure's curves");
  add_common(fig, common, false);
  fig->add_option("name", figure_id, "fig1 | fig2 | fig3 | fig4")->required();
  fig->add_option("--outdir", outdir, "output directory");

  auto* ver = app.add_subcommand("verify", "compare against the covariance oracle");
  add_common(ver, common);
  ver->add_option("--tolerance", tolerance, "maximum allowed deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sim) return simulate(common);
    if (*swp) return sweep(common, params, outdir);
    if (*fig) return figure(common, figure_id, outdir);
    if (*ver) return verify(common, tolerance);
  } catch (const chainent::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const chainent::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
