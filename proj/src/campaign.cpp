#include "rp3p/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "rp3p/baseline_pnp.hpp"
#include "rp3p/error.hpp"

namespace rp3p {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string_view failure_tag(const Error& e) {
  return e.stage() == Stage::None ? std::string_view("solver") : to_string(e.stage());
}

unsigned worker_count(const ScenarioConfig& cfg, std::size_t n) {
  unsigned t = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(n, 1)));
}

// Calls body(i) for i in [0, n) over contiguous blocks, one per worker.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const std::size_t block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double MetricsReport::cdf(double pe_m) const {
  if (pe_sorted.empty()) return 0.0;
  const auto it = std::upper_bound(pe_sorted.begin(), pe_sorted.end(), pe_m);
  return static_cast<double>(it - pe_sorted.begin()) / static_cast<double>(pe_sorted.size());
}

TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, std::size_t index) {
  std::mt19937_64 rng = trial_rng(cfg.rng_seed, index);
  const SynthesizedTrial trial = synthesize_trial(cfg, algorithm, index, rng);

  TrialResult r;
  r.trial_id = index;
  r.true_position = trial.truth.pose.center();
  if (!trial.feasible()) {
    r.failure = to_string(trial.infeasible);
    return r;
  }
  try {
    PositionEstimate est;
    const auto t0 = Clock::now();
    if (algorithm == Algorithm::Rp3p) {
      est = estimate_position(trial.frame, cfg.camera.intrinsics, cfg.pd, rng);
    } else {
      const std::vector<ImageObservation> images = trial.images();
      est = estimate_position_pnp(images, cfg.camera.intrinsics);
    }
    if (cfg.record_timing) r.solve_time = seconds_since(t0);
    r.estimate = est.position;
    r.pe = (est.position - r.true_position).norm();
    r.feasible = true;
    r.tolerance = est.tolerance;
    r.ambiguous = est.ambiguous;
  } catch (const Error& e) {
    r.failure = failure_tag(e);
  }
  return r;
}

MetricsReport summarize(Algorithm algorithm, std::vector<TrialResult> trials, bool keep_trials) {
  MetricsReport rep;
  rep.algorithm = algorithm;
  rep.total = trials.size();
  double pe_sum = 0.0;
  for (const auto& t : trials) {
    if (t.feasible) {
      ++rep.feasible;
      rep.pe_sorted.push_back(t.pe);
      pe_sum += t.pe;
      if (t.ambiguous) ++rep.ambiguous;
      if (t.solve_time > 0.0) rep.times_sorted.push_back(t.solve_time);
    } else {
      ++rep.failures[std::string(t.failure)];
    }
  }
  rep.coverage = rep.total ? static_cast<double>(rep.feasible) / static_cast<double>(rep.total) : 0.0;
  std::sort(rep.pe_sorted.begin(), rep.pe_sorted.end());
  std::sort(rep.times_sorted.begin(), rep.times_sorted.end());
  rep.mean_pe = rep.feasible ? pe_sum / static_cast<double>(rep.feasible) : 0.0;
  rep.p50 = percentile(rep.pe_sorted, 0.50);
  rep.p80 = percentile(rep.pe_sorted, 0.80);
  rep.p95 = percentile(rep.pe_sorted, 0.95);
  rep.median_time = percentile(rep.times_sorted, 0.50);
  if (keep_trials) rep.trials = std::move(trials);
  return rep;
}

MetricsReport run_campaign(const ScenarioConfig& cfg, Algorithm algorithm, bool keep_trials) {
  cfg.validate();
  if (cfg.leds.size() < led_count(algorithm)) {
    throw Error(ErrorCode::Config, std::string(to_string(algorithm)) + " needs " +
                                       std::to_string(led_count(algorithm)) + " LEDs in the scenario");
  }
  const std::size_t n = cfg.trial_count();
  std::vector<TrialResult> trials(n);
  parallel_for(n, worker_count(cfg, n), [&](std::size_t i) { trials[i] = run_trial(cfg, algorithm, i); });
  return summarize(algorithm, std::move(trials), keep_trials);
}

std::vector<SweepPoint> sweep(const ScenarioConfig& base, const std::string& param, const std::vector<double>& values,
                              const std::vector<Algorithm>& algorithms,
                              const std::function<void(ScenarioConfig&, double)>& apply) {
  std::vector<SweepPoint> out;
  for (double v : values) {
    ScenarioConfig cfg = base;
    apply(cfg, v);
    for (Algorithm a : algorithms) {
      out.push_back({{{param, v}}, run_campaign(cfg, a, false)});
    }
  }
  return out;
}

std::vector<SweepPoint> coverage_sweep(const ScenarioConfig& base, const std::vector<double>& fov_deg,
                                       const std::vector<double>& tilt_deg, const std::vector<Algorithm>& algorithms) {
  std::vector<SweepPoint> out;
  for (double tilt : tilt_deg) {
    for (double fov : fov_deg) {
      ScenarioConfig cfg = base;
      cfg.pd.fov = fov * kDeg;
      cfg.tilt.mode = TiltMode::Fixed;
      cfg.tilt.theta = tilt * kDeg;
      for (Algorithm a : algorithms) {
        out.push_back({{{"fov_deg", fov}, {"tilt_deg", tilt}}, run_campaign(cfg, a, false)});
      }
    }
  }
  return out;
}

BenchResult bench(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.leds.size() < 4) throw Error(ErrorCode::Config, "bench needs 4 LEDs in the scenario");
  BenchResult res;
  const std::size_t n = cfg.trial_count();
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng = trial_rng(cfg.rng_seed, i);
    const SynthesizedTrial trial = synthesize_trial(cfg, Algorithm::Pnp4, i, rng);
    if (!trial.feasible()) continue;
    MeasurementFrame frame3;
    frame3.entries.assign(trial.frame.entries.begin(), trial.frame.entries.begin() + 3);
    const std::vector<ImageObservation> images = trial.images();
    try {
      // Alternate which estimator runs first so neither gains from a warm cache.
      double ta = 0.0, tb = 0.0;
      const auto time_rp3p = [&] {
        const auto t0 = Clock::now();
        (void)estimate_position(frame3, cfg.camera.intrinsics, cfg.pd, rng);
        ta = seconds_since(t0);
      };
      const auto time_pnp4 = [&] {
        const auto t0 = Clock::now();
        (void)estimate_position_pnp(images, cfg.camera.intrinsics);
        tb = seconds_since(t0);
      };
      if (i % 2 == 0) {
        time_rp3p();
        time_pnp4();
      } else {
        time_pnp4();
        time_rp3p();
      }
      res.rp3p_times.push_back(ta);
      res.pnp4_times.push_back(tb);
    } catch (const Error&) {
      continue;
    }
  }
  std::vector<double> sa = res.rp3p_times, sb = res.pnp4_times;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  res.rp3p_median = percentile(sa, 0.5);
  res.pnp4_median = percentile(sb, 0.5);
  return res;
}

}  // namespace rp3p
