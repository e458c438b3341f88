#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vblob/experiments.hpp"
#include "vblob/weakform.hpp"

namespace vblob::io {

/// Round-trip exact decimal formatting, used everywhere so reruns are
/// byte-identical.
std::string format_double(double v);

/// CSV with a leading "# schema: <name> v1" comment line.
struct Csv {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::filesystem::path& path, const Csv& csv);
Csv read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Minimal log-log or linear polyline plot; one series per call site.
std::string svg_polyline(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& x_label, const std::string& y_label,
                         bool log_log);

/// Report writers; each fills `dir` with one or more schema-tagged CSVs.
void write_convergence_report(const std::filesystem::path& dir,
                              const ConvergenceReport& rep);
void write_stability_report(const std::filesystem::path& dir, const StabilityReport& rep);
void write_slope_report(const std::filesystem::path& dir, const SlopeReport& rep,
                        bool with_svg);
void write_probe_report(const std::filesystem::path& dir, const ProbeReport& rep);
void write_residual_reports(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, ResidualReport>>& reports);

/// Label positions at the stored times, one CSV per checkpoint index stride.
void write_run_snapshots(const std::filesystem::path& dir, const FlowMap& run,
                         std::size_t every);

}  // namespace vblob::io
