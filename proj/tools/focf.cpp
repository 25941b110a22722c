#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "focf/acceptance.hpp"
#include "focf/runner.hpp"

namespace fs = std::filesystem;
using focf::ConfigError;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitSingularity = 3;
constexpr int kExitMonitorFailure = 4;

focf::RunConfig load_with_overrides(const std::string& config_path, double tol,
                                    long seed, const std::vector<std::string>& sets) {
  focf::RunConfig cfg =
      config_path.empty() ? focf::RunConfig{} : focf::load_config(config_path);
  if (tol > 0) focf::apply_override(cfg, "tolerance", std::to_string(tol));
  if (seed >= 0) focf::apply_override(cfg, "seed", std::to_string(seed));
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    focf::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const std::string& out, double tol, long seed,
            const std::vector<std::string>& sets, bool fail_on_singularity) {
  focf::RunConfig cfg = load_with_overrides(config_path, tol, seed, sets);
  focf::RunArtifacts art = focf::execute_run(cfg, out);
  std::cout << "status: " << focf::to_string(art.status) << "  steps: " << art.steps
            << "  t_last: " << art.t_last << "\n";
  for (const auto& m : art.monitors)
    std::cout << "  monitor " << m.name << ": " << (m.pass ? "pass" : "FAIL") << "  value "
              << m.value << (m.detail.empty() ? "" : "  " + m.detail) << "\n";
  std::cout << "series: " << art.csv_path.string() << "\nmanifest: " << art.manifest_path.string()
            << "\n";
  if ((fail_on_singularity || cfg.fail_on_singularity) &&
      art.status == focf::TerminationStatus::SingularityCandidate)
    return kExitSingularity;
  if (!art.monitors_ok()) return kExitMonitorFailure;
  return kExitOk;
}

int cmd_check(int only) {
  focf::AcceptanceOptions opt;
  opt.log = &std::cout;
  opt.only = only;
  auto results = focf::run_acceptance(opt);
  std::cout << "\n" << focf::format_acceptance_table(results);
  for (const auto& r : results)
    if (!r.pass) return kExitMonitorFailure;
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, double tol, long seed,
              const std::vector<std::string>& sets, const std::vector<std::string>& vary,
              int threads) {
  focf::RunConfig base = load_with_overrides(config_path, tol, seed, sets);
  std::vector<focf::SweepAxis> axes;
  for (const auto& v : vary) {
    auto eq = v.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--vary expects key=v1,v2,..., got '" + v + "'");
    focf::SweepAxis ax;
    ax.key = v.substr(0, eq);
    std::string rest = v.substr(eq + 1);
    std::size_t pos = 0;
    while (pos != std::string::npos) {
      auto comma = rest.find(',', pos);
      ax.values.push_back(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
      pos = comma == std::string::npos ? comma : comma + 1;
    }
    axes.push_back(std::move(ax));
  }
  focf::SweepSummary sum = focf::run_sweep(base, axes, out, threads);
  int ok = 0;
  for (const auto& c : sum.cells) ok += c.ok;
  std::cout << "sweep: " << ok << "/" << sum.cells.size() << " cells ok\nsummary: "
            << sum.summary_csv.string() << "\n";
  return sum.all_ok() ? kExitOk : kExitMonitorFailure;
}

int cmd_rescale(const std::string& traj, double lambda, double t0, const std::string& out) {
  focf::RescaleArtifacts art = focf::rescale_trajectory(traj, lambda, t0, out);
  std::cout << "rescaled trajectory: " << (art.out_dir / "trajectory").string() << "\n"
            << "report: " << art.report_path.string() << "\n"
            << "sup|Rm| ratio vs expected: " << art.sup_rm_ratio << "\n"
            << "smoothing monitor drift: " << art.smoothing_invariance << "\n";
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  fs::path man = fs::path(dir) / "manifest.json";
  std::ifstream is(man);
  if (!is) throw ConfigError("no manifest.json in " + dir);
  nlohmann::json j;
  is >> j;
  std::cout << "run " << dir << "\n"
            << "  flow " << j.value("flow", "?") << ", geometry " << j.value("geometry", "?")
            << ", preset " << j.value("preset", "?") << ", n = " << j.value("n", 0) << "\n"
            << "  termination " << j.value("termination", "?") << " after " << j.value("steps", 0)
            << " steps, t_last " << j.value("t_last", 0.0) << "\n";
  if (j.contains("monitors")) {
    for (auto& [name, m] : j["monitors"].items())
      std::cout << "  monitor " << name << ": " << (m.value("pass", false) ? "pass" : "FAIL")
                << "  value " << m.value("value", 0.0) << "  " << m.value("detail", "") << "\n";
  }
  if (j.contains("classifier_verdict"))
    std::cout << "  verdict: " << j["classifier_verdict"].get<std::string>() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fourth-order curvature flow laboratory"};
  app.require_subcommand(1);

  std::string config, out = "out", traj;
  double tol = -1.0, lambda = 1.0, t0 = 0.0;
  long seed = -1;
  int threads = 1, only = 0;
  bool fail_on_sing = false;
  std::vector<std::string> sets, vary;

  auto* run = app.add_subcommand("run", "execute one configured flow run");
  run->add_option("--config", config, "run configuration file");
  run->add_option("--out", out, "output directory");
  run->add_option("--tol", tol, "override integrator tolerance");
  run->add_option("--seed", seed, "override preset seed");
  run->add_option("--set", sets, "extra key=value overrides")->take_all();
  run->add_flag("--fail-on-singularity", fail_on_sing,
                "exit 3 when the run ends as a singularity candidate");

  auto* check = app.add_subcommand("check", "run the built-in verification suite");
  check->add_option("--only", only, "run a single criterion by number");

  auto* sweep = app.add_subcommand("sweep", "run a parameter grid of configured runs");
  sweep->add_option("--config", config, "base configuration file");
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--tol", tol, "override integrator tolerance");
  sweep->add_option("--seed", seed, "override preset seed");
  sweep->add_option("--set", sets, "extra key=value overrides")->take_all();
  sweep->add_option("--vary", vary, "sweep axis key=v1,v2,...")->take_all()->required();
  sweep->add_option("--threads", threads, "concurrent runs");

  auto* rescale = app.add_subcommand("rescale", "parabolically rescale a stored trajectory");
  rescale->add_option("trajectory", traj, "trajectory directory")->required();
  rescale->add_option("--lambda", lambda, "scale factor")->required();
  rescale->add_option("--t0", t0, "base time");
  rescale->add_option("--out", out, "output directory");

  auto* report = app.add_subcommand("report", "summarize a finished run directory");
  report->add_option("dir", traj, "run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config, out, tol, seed, sets, fail_on_sing);
    if (check->parsed()) return cmd_check(only);
    if (sweep->parsed()) return cmd_sweep(config, out, tol, seed, sets, vary, threads);
    if (rescale->parsed()) return cmd_rescale(traj, lambda, t0, out);
    if (report->parsed()) return cmd_report(traj);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const focf::RangeEmpty& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
