#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rp3p/scenario.hpp"

namespace rp3p {

struct TrialResult {
  std::size_t trial_id = 0;
  Vec3 true_position = Vec3::Zero();
  std::optional<Vec3> estimate;
  double pe = 0.0;  // m, meaningful only with an estimate
  bool feasible = false;
  double solve_time = 0.0;  // s, 0 unless timing is recorded
  double tolerance = 0.0;
  bool ambiguous = false;
  /// Empty on success; an infeasibility tag or the failing solver stage.
  std::string_view failure;
};

struct MetricsReport {
  Algorithm algorithm = Algorithm::Rp3p;
  std::size_t total = 0;
  std::size_t feasible = 0;
  std::size_t ambiguous = 0;
  /// Feasible trials over all trials.
  double coverage = 0.0;
  /// Positioning errors of successful trials, ascending.
  std::vector<double> pe_sorted;
  double mean_pe = 0.0;
  double p50 = 0.0, p80 = 0.0, p95 = 0.0;
  /// Solve times of successful trials, ascending (empty without timing).
  std::vector<double> times_sorted;
  double median_time = 0.0;
  std::map<std::string, std::size_t, std::less<>> failures;
  /// Per-trial rows, ordered by trial id. Empty when not kept.
  std::vector<TrialResult> trials;

  /// Empirical CDF of PE at `pe_m`.
  double cdf(double pe_m) const;
};

/// Linear-interpolation percentile (q in [0, 1]) of ascending samples; 0 if empty.
double percentile(const std::vector<double>& sorted, double q);

/// Runs one trial end to end.
TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::size_t index);

/// Runs every trial of the scenario. Trials are spread over worker threads;
/// each draws from trial_rng(seed, index), so results do not depend on the
/// thread count.
MetricsReport run_campaign(const ScenarioConfig& cfg, Algorithm algorithm, bool keep_trials = true);

/// Builds the summary fields from per-trial results.
MetricsReport summarize(Algorithm algorithm, std::vector<TrialResult> trials, bool keep_trials = true);

struct SweepPoint {
  std::vector<std::pair<std::string, double>> params;
  MetricsReport report;
};

/// One campaign per (value, algorithm); `apply` writes the value into a copy
/// of the base scenario.
std::vector<SweepPoint> sweep(const ScenarioConfig& base, const std::string& param, const std::vector<double>& values,
                              const std::vector<Algorithm>& algorithms,
                              const std::function<void(ScenarioConfig&, double)>& apply);

/// Coverage over (receiver FoV, fixed LED tilt) cells, angles in degrees.
std::vector<SweepPoint> coverage_sweep(const ScenarioConfig& base, const std::vector<double>& fov_deg,
                                       const std::vector<double>& tilt_deg, const std::vector<Algorithm>& algorithms);

struct BenchResult {
  std::vector<double> rp3p_times;  // s, per solve
  std::vector<double> pnp4_times;
  double rp3p_median = 0.0;
  double pnp4_median = 0.0;
};

/// Times both estimators on the same 4-LED frames (R-P3P reads the first
/// three). Only frames feasible for both enter the comparison.
BenchResult bench(const ScenarioConfig& cfg);

// CSV export ---------------------------------------------------------------

inline constexpr std::string_view kTrialCsvHeader =
    "trial_id,true_x,true_y,true_z,est_x,est_y,est_z,pe_m,feasible,solve_time_s,tolerance_level,ambiguous,"
    "failure_stage";
inline constexpr std::string_view kSummaryCsvHeader = "cr,mean_pe_m,p50_pe_m,p80_pe_m,p95_pe_m,median_time_s";

std::string trials_csv(const MetricsReport& report);
std::string summary_csv(const MetricsReport& report);
std::string sweep_csv(const std::vector<SweepPoint>& points);

/// `<dir>/<stem>_summary.csv` next to a per-trial CSV path.
std::filesystem::path summary_path(const std::filesystem::path& trials_path);

/// Writes the per-trial CSV to `path` and the summary CSV to summary_path(path).
void export_report(const MetricsReport& report, const std::filesystem::path& path);

/// Writes `text` to `path`; throws Io with the path on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rp3p
