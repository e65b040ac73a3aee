#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "manet/network.h"
#include "manet/scenario.h"

namespace manet {

enum class SweepAxis : std::uint8_t { PauseTime, NodeCount };
std::string_view AxisName(SweepAxis axis);
/// Throws ScenarioError for anything but pause_time or node_count.
SweepAxis ParseAxis(std::string_view name);

struct SweepSpec {
  Scenario base;
  SweepAxis axis = SweepAxis::PauseTime;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};

struct SweepPoint {
  double value = 0.0;
  std::uint64_t seed = 0;
  ProtocolKind protocol = ProtocolKind::Aodv;
  Scenario scenario;
};

/// Every (value, seed, protocol) run, ordered that way. All of them are
/// validated before this returns, so a bad point aborts the sweep up front.
std::vector<SweepPoint> ExpandSweep(const SweepSpec& spec);

struct SweepRow {
  SweepPoint point;
  RunResult result;
};

/// Reference implementation: one run after another.
std::vector<SweepRow> RunSweepSerial(const std::vector<SweepPoint>& points);
/// Same rows, runs spread over OpenMP threads. threads <= 0 keeps the default.
std::vector<SweepRow> RunSweepParallel(const std::vector<SweepPoint>& points, int threads = 0);

/// Metric columns in CSV order, with the value of each for one run; nullopt
/// stands for an undefined metric (written as NA).
std::vector<std::pair<std::string, std::optional<double>>> MetricColumns(const RunResult& result);

/// Long format: `#` lines with every parameter of the base scenario and the
/// sweep definition, a header row, then one row per run.
void WriteSweepCsv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);
/// Single-run CSV with the same columns.
void WriteRunCsv(std::ostream& out, const Scenario& scenario, const RunResult& result);
void WriteEnergyCsv(std::ostream& out, const MetricsReport& report);

struct MetricSummary {
  std::size_t n = 0;  // runs where the metric was defined
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for n < 2
};

/// (axis value, protocol) -> metric -> summary.
using SummaryTable = std::map<std::pair<double, std::string>, std::map<std::string, MetricSummary>>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
};
/// Reads a CSV written by WriteSweepCsv or WriteRunCsv.
CsvTable ReadCsv(std::istream& in);
/// Merges run rows (rows must share the header) into per-metric summaries.
SummaryTable Summarize(const std::vector<CsvTable>& tables);
SummaryTable Summarize(const std::vector<SweepRow>& rows);
MetricSummary Summarize(const std::vector<double>& samples);

/// Summary as CSV: value,protocol,metric,n,mean,stddev.
void WriteSummaryCsv(std::ostream& out, const SummaryTable& table);
/// Plain-text tables, one per metric, AODV and M-AODV side by side.
void WriteReport(std::ostream& out, const SummaryTable& table);

}  // namespace manet
