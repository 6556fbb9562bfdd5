#include <cstdio>
#include <fstream>
#include <string>

#include "rp3p/campaign.hpp"
#include "rp3p/error.hpp"

namespace rp3p {

namespace {

void append(std::string& out, const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  out += buf;
}

void append_summary_fields(std::string& out, const MetricsReport& r) {
  append(out, "%.6f", r.coverage);
  for (double v : {r.mean_pe, r.p50, r.p80, r.p95}) {
    out += ',';
    append(out, "%.9f", v);
  }
  out += ',';
  append(out, "%.9e", r.median_time);
}

}  // namespace

std::string trials_csv(const MetricsReport& report) {
  std::string out(kTrialCsvHeader);
  out += '\n';
  for (const auto& t : report.trials) {
    out += std::to_string(t.trial_id);
    for (int k = 0; k < 3; ++k) {
      out += ',';
      append(out, "%.9f", t.true_position[k]);
    }
    for (int k = 0; k < 3; ++k) {
      out += ',';
      if (t.estimate) append(out, "%.9f", (*t.estimate)[k]);
    }
    out += ',';
    if (t.estimate) append(out, "%.9f", t.pe);
    out += t.feasible ? ",1," : ",0,";
    append(out, "%.9e", t.solve_time);
    out += ',';
    if (t.feasible) append(out, "%.2f", t.tolerance);
    out += t.ambiguous ? ",1," : ",0,";
    out += t.failure;
    out += '\n';
  }
  return out;
}

std::string summary_csv(const MetricsReport& report) {
  std::string out(kSummaryCsvHeader);
  out += '\n';
  append_summary_fields(out, report);
  out += '\n';
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out;
  if (!points.empty()) {
    for (const auto& [name, value] : points.front().params) out += name + ',';
  }
  out += "algorithm,n_trials,n_feasible,n_ambiguous,";
  out += kSummaryCsvHeader;
  out += '\n';
  for (const auto& p : points) {
    for (const auto& [name, value] : p.params) {
      append(out, "%g", value);
      out += ',';
    }
    out += to_string(p.report.algorithm);
    out += ',' + std::to_string(p.report.total) + ',' + std::to_string(p.report.feasible) + ',' +
           std::to_string(p.report.ambiguous) + ',';
    append_summary_fields(out, p.report);
    out += '\n';
  }
  return out;
}

std::filesystem::path summary_path(const std::filesystem::path& trials_path) {
  std::filesystem::path p = trials_path;
  p.replace_filename(trials_path.stem().string() + "_summary.csv");
  return p;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void export_report(const MetricsReport& report, const std::filesystem::path& path) {
  write_text_file(path, trials_csv(report));
  write_text_file(summary_path(path), summary_csv(report));
}

}  // namespace rp3p
