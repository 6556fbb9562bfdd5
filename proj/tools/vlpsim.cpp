// vlpsim: Monte Carlo campaigns for the R-P3P estimator and the 4-LED PnP baseline.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rp3p/campaign.hpp"
#include "rp3p/config.hpp"
#include "rp3p/error.hpp"

namespace {

using namespace rp3p;

constexpr double kDeg = 3.14159265358979323846 / 180.0;

struct CommonOptions {
  std::string config_path;
  std::string algorithm;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_algorithm) {
  cmd->add_option("--config", o.config_path, "Scenario JSON file (defaults to the reference setup)")
      ->check(CLI::ExistingFile);
  if (with_algorithm) {
    cmd->add_option("--algorithm", o.algorithm, "rp3p or pnp4 (sweeps run both when omitted)")
        ->check(CLI::IsMember({"rp3p", "pnp4"}));
  }
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--trials", o.trials, "Trials per campaign (random placement)");
  cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
  cmd->add_option("--out", o.out, "CSV output path (stdout when omitted)");
}

ScenarioConfig scenario(const CommonOptions& o) {
  ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig::reference() : load_config(o.config_path);
  if (o.seed) cfg.rng_seed = *o.seed;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

std::vector<Algorithm> algorithms(const CommonOptions& o) {
  if (!o.algorithm.empty()) return {parse_algorithm(o.algorithm)};
  return {Algorithm::Rp3p, Algorithm::Pnp4};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

void print_summary(const MetricsReport& r) {
  std::fprintf(stderr, "%s: %zu trials, %zu feasible (CR %.4f), %zu ambiguous\n", std::string(to_string(r.algorithm)).c_str(),
               r.total, r.feasible, r.coverage, r.ambiguous);
  std::fprintf(stderr, "  PE mean %.4f m, p50 %.4f m, p80 %.4f m, p95 %.4f m\n", r.mean_pe, r.p50, r.p80, r.p95);
  for (const auto& [cause, count] : r.failures) std::fprintf(stderr, "  failed %-15s %zu\n", cause.c_str(), count);
}

void run_sweep(const CommonOptions& o, const std::string& param, const std::vector<double>& values,
               const std::function<void(ScenarioConfig&, double)>& apply) {
  const auto points = sweep(scenario(o), param, values, algorithms(o), apply);
  emit(o.out, sweep_csv(points));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visible-light positioning simulator (R-P3P and 4-LED PnP)"};
  app.require_subcommand(1);

  CommonOptions run_o, fov_o, tilt_o, noise_o, dpc_o, bench_o, cfg_o;

  auto* run = app.add_subcommand("run", "Single campaign; writes per-trial and summary CSVs");
  add_common(run, run_o, true);

  auto* sweep_fov = app.add_subcommand("sweep-fov", "Coverage over receiver FoV and fixed LED tilt on a grid");
  add_common(sweep_fov, fov_o, true);
  std::vector<double> fovs{10, 20, 30, 40, 50, 60, 70, 80};
  std::vector<double> fov_tilts{0, 10, 30};
  double grid_spacing = 0.05;
  sweep_fov->add_option("--fovs", fovs, "Receiver FoV values (deg)");
  sweep_fov->add_option("--tilts", fov_tilts, "LED tilt values (deg)");
  sweep_fov->add_option("--grid", grid_spacing, "Grid spacing (m)");

  auto* sweep_tilt = app.add_subcommand("sweep-tilt", "PE over fixed LED tilt");
  add_common(sweep_tilt, tilt_o, true);
  std::vector<double> tilts{0, 10, 20, 30, 40, 60};
  sweep_tilt->add_option("--values", tilts, "LED tilt values (deg)");

  auto* sweep_noise = app.add_subcommand("sweep-imagenoise", "PE over pixel noise std");
  add_common(sweep_noise, noise_o, true);
  std::vector<double> noises{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
  sweep_noise->add_option("--values", noises, "Pixel noise std values (px)");

  auto* sweep_dpc = app.add_subcommand("sweep-dpc", "PE over PD-camera offset");
  add_common(sweep_dpc, dpc_o, true);
  std::vector<double> dpcs{0, 1, 3, 6, 10};
  sweep_dpc->add_option("--values", dpcs, "Offsets (cm)");

  auto* bench_cmd = app.add_subcommand("bench", "Solve-time comparison on shared 4-LED frames");
  add_common(bench_cmd, bench_o, false);

  auto* dump = app.add_subcommand("config", "Print the effective scenario as JSON");
  add_common(dump, cfg_o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ScenarioConfig cfg = scenario(run_o);
      const Algorithm alg = run_o.algorithm.empty() ? Algorithm::Rp3p : parse_algorithm(run_o.algorithm);
      const MetricsReport rep = run_campaign(cfg, alg);
      if (run_o.out.empty()) {
        std::cout << trials_csv(rep);
      } else {
        export_report(rep, run_o.out);
      }
      print_summary(rep);
    } else if (*sweep_fov) {
      ScenarioConfig cfg = scenario(fov_o);
      cfg.placement.mode = PlacementMode::Grid;
      cfg.placement.grid_spacing = grid_spacing;
      emit(fov_o.out, sweep_csv(coverage_sweep(cfg, fovs, fov_tilts, algorithms(fov_o))));
    } else if (*sweep_tilt) {
      run_sweep(tilt_o, "tilt_deg", tilts, [](ScenarioConfig& c, double v) {
        c.tilt.mode = TiltMode::Fixed;
        c.tilt.theta = v * kDeg;
      });
    } else if (*sweep_noise) {
      run_sweep(noise_o, "pixel_noise_std_px", noises,
                [](ScenarioConfig& c, double v) { c.noise.pixel_noise_std = v; });
    } else if (*sweep_dpc) {
      run_sweep(dpc_o, "d_pc_cm", dpcs, [](ScenarioConfig& c, double v) { c.d_pc = v / 100.0; });
    } else if (*bench_cmd) {
      ScenarioConfig cfg = scenario(bench_o);
      const BenchResult b = bench(cfg);
      std::string text = "algorithm,n_solves,median_time_s\n";
      char line[128];
      std::snprintf(line, sizeof line, "rp3p,%zu,%.9e\npnp4,%zu,%.9e\n", b.rp3p_times.size(), b.rp3p_median,
                    b.pnp4_times.size(), b.pnp4_median);
      text += line;
      emit(bench_o.out, text);
    } else if (*dump) {
      emit(cfg_o.out, dump_config(scenario(cfg_o)));
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "vlpsim: %s\n", e.what());
    return 1;
  }
  return 0;
}
