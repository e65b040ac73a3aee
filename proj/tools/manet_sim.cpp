// Command-line front end: run, sweep, validate, report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "manet/network.h"
#include "manet/scenario.h"
#include "manet/sweep.h"

namespace fs = std::filesystem;
using namespace manet;

namespace {

/// Output file that only appears under its final name on Commit().
class StagedFile {
 public:
  explicit StagedFile(std::string path) : m_path(std::move(path)), m_tmp(m_path + ".partial") {
    m_out.open(m_tmp);
    if (!m_out) {
      throw std::runtime_error(fmt::format("cannot write '{}'", m_path));
    }
  }
  ~StagedFile() {
    if (!m_committed) {
      m_out.close();
      std::error_code ec;
      fs::remove(m_tmp, ec);
    }
  }
  std::ostream& Stream() { return m_out; }
  void Commit() {
    m_out.close();
    if (!m_out) {
      throw std::runtime_error(fmt::format("write to '{}' failed", m_path));
    }
    fs::rename(m_tmp, m_path);
    m_committed = true;
  }

 private:
  std::string m_path;
  std::string m_tmp;
  std::ofstream m_out;
  bool m_committed = false;
};

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  StagedFile f(path);
  f.Stream() << text;
  f.Commit();
}

struct RunArgs {
  std::string scenario;
  std::string trace;
  std::string csv;
  std::string energyCsv;
  std::string schedule;
  std::string protocol;
  std::optional<std::uint64_t> seed;
};

int DoRun(const RunArgs& a) {
  Scenario s = LoadScenario(a.scenario);
  if (!a.protocol.empty()) {
    std::istringstream in("protocol = " + a.protocol);
    s.protocol = ParseScenario(in).protocol;
  }
  if (a.seed) {
    s.seed = *a.seed;
  }
  Validate(s);

  std::unique_ptr<StagedFile> trace;
  RunOptions options;
  if (!a.trace.empty()) {
    trace = std::make_unique<StagedFile>(a.trace);
    options.traceSink = &trace->Stream();
  }
  Network net(s, options);
  net.Finish();
  if (auto problems = net.Audit(); !problems.empty()) {
    throw SimulationFault(problems.front());
  }
  RunResult result{net.Report(), net.Counters(), net.Trace().Digest(), net.Trace().LineCount(), net.Flows()};

  std::ostringstream csv;
  WriteRunCsv(csv, s, result);
  std::ostringstream energy;
  WriteEnergyCsv(energy, result.report);
  std::ostringstream schedule;
  for (NodeId n = 0; n < s.nodeCount; ++n) {
    WriteSchedule(schedule, n, net.Schedules()[n]);
  }

  if (trace) {
    trace->Commit();
  }
  if (!a.csv.empty()) {
    Emit(a.csv, csv.str());
  }
  if (!a.energyCsv.empty()) {
    Emit(a.energyCsv, energy.str());
  }
  if (!a.schedule.empty()) {
    Emit(a.schedule, schedule.str());
  }

  const MetricsReport& r = result.report;
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : std::string("NA"); };
  std::cerr << fmt::format(
      "{} {} seed {}: sent {} delivered {} dropped {} in_flight {} | throughput {:.3f} kb/s, delay {} s, pdr {:.4f}, "
      "loss {:.4f}, nrl {} | energy {:.4f} J (routing {:.4f} J) | digest {:016x}\n",
      s.id, ProtocolName(s.protocol), s.seed, r.sent, r.delivered, r.dropped, r.inFlight, r.throughputKbps,
      opt(r.avgDelay), r.pdr, r.lossRatio, opt(r.nrl), r.FinalNetworkJoules(), r.FinalRoutingJoules(),
      result.traceDigest);
  return 0;
}

struct SweepArgs {
  std::string scenario;
  std::string axis;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::string out = "-";
  std::string summary;
  int threads = 0;
  bool serial = false;
};

int DoSweep(const SweepArgs& a) {
  SweepSpec spec;
  spec.base = LoadScenario(a.scenario);
  spec.axis = ParseAxis(a.axis);
  spec.values = a.values;
  spec.seeds = a.seeds;
  const auto points = ExpandSweep(spec);
  std::cerr << fmt::format("sweep: {} runs\n", points.size());
  const auto rows = a.serial ? RunSweepSerial(points) : RunSweepParallel(points, a.threads);

  std::ostringstream csv;
  WriteSweepCsv(csv, spec, rows);
  std::ostringstream summary;
  WriteSummaryCsv(summary, Summarize(rows));
  Emit(a.out, csv.str());
  if (!a.summary.empty()) {
    Emit(a.summary, summary.str());
  }
  return 0;
}

int DoValidate(const std::string& path) {
  Scenario s = LoadScenario(path);
  std::cout << fmt::format("{}: ok ({} nodes, {}, {} s)\n", path, s.nodeCount, ProtocolName(s.protocol), s.duration);
  return 0;
}

int DoReport(const std::vector<std::string>& files, const std::string& summaryPath) {
  std::vector<CsvTable> tables;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      throw std::runtime_error(fmt::format("cannot open '{}'", f));
    }
    try {
      tables.push_back(ReadCsv(in));
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("{}: {}", f, e.what()));
    }
  }
  const SummaryTable table = Summarize(tables);
  std::ostringstream text;
  WriteReport(text, table);
  std::cout << text.str();
  if (!summaryPath.empty()) {
    std::ostringstream csv;
    WriteSummaryCsv(csv, table);
    Emit(summaryPath, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event MANET simulator comparing AODV and multipath AODV"};
  app.require_subcommand(1);

  RunArgs runArgs;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", runArgs.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--trace", runArgs.trace, "Write the event trace here");
  run->add_option("--csv", runArgs.csv, "Write the result row here ('-' for stdout)");
  run->add_option("--energy-csv", runArgs.energyCsv, "Write the energy series here");
  run->add_option("--schedule", runArgs.schedule, "Write the mobility schedule here");
  run->add_option("--protocol", runArgs.protocol, "Override the protocol (aodv|maodv)");
  run->add_option("--seed", runArgs.seed, "Override the master seed");

  SweepArgs sweepArgs;
  auto* sweep = app.add_subcommand("sweep", "Run both protocols over an axis and a seed list");
  sweep->add_option("scenario", sweepArgs.scenario, "Base scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", sweepArgs.axis, "pause_time or node_count")->required();
  sweep->add_option("--values", sweepArgs.values, "Axis values")->required();
  sweep->add_option("--seeds", sweepArgs.seeds, "Master seeds")->required();
  sweep->add_option("--out", sweepArgs.out, "Long-format CSV ('-' for stdout)");
  sweep->add_option("--summary", sweepArgs.summary, "Mean/stddev summary CSV");
  sweep->add_option("--threads", sweepArgs.threads, "Worker threads (0 = OpenMP default)");
  sweep->add_flag("--serial", sweepArgs.serial, "Use the single-threaded runner");

  std::string validatePath;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", validatePath, "Scenario file")->required()->check(CLI::ExistingFile);

  std::vector<std::string> reportFiles;
  std::string reportSummary;
  auto* report = app.add_subcommand("report", "Merge sweep CSVs into per-metric tables");
  report->add_option("csv", reportFiles, "Sweep CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--summary", reportSummary, "Also write the merged summary CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return DoRun(runArgs);
    }
    if (sweep->parsed()) {
      return DoSweep(sweepArgs);
    }
    if (validate->parsed()) {
      return DoValidate(validatePath);
    }
    if (report->parsed()) {
      return DoReport(reportFiles, reportSummary);
    }
  } catch (const ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 2;
  } catch (const SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
