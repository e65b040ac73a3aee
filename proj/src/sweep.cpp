#include "manet/sweep.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace manet {

std::string_view AxisName(SweepAxis axis) { return axis == SweepAxis::PauseTime ? "pause_time" : "node_count"; }

SweepAxis ParseAxis(std::string_view name) {
  if (name == "pause_time") {
    return SweepAxis::PauseTime;
  }
  if (name == "node_count") {
    return SweepAxis::NodeCount;
  }
  throw ScenarioError("axis", fmt::format("expected pause_time or node_count, got '{}'", name));
}

std::vector<SweepPoint> ExpandSweep(const SweepSpec& spec) {
  if (spec.values.empty()) {
    throw ScenarioError("values", "need at least one axis value");
  }
  if (spec.seeds.empty()) {
    throw ScenarioError("seeds", "need at least one seed");
  }
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw ScenarioError("values", "duplicate axis value");
  }
  if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end()) {
    throw ScenarioError("seeds", "duplicate seed");
  }

  std::vector<SweepPoint> points;
  for (double v : values) {
    for (std::uint64_t seed : seeds) {
      for (ProtocolKind protocol : {ProtocolKind::Aodv, ProtocolKind::Maodv}) {
        SweepPoint p{v, seed, protocol, spec.base};
        p.scenario.seed = seed;
        p.scenario.protocol = protocol;
        if (spec.axis == SweepAxis::PauseTime) {
          p.scenario.mobility.pauseTime = v;
        } else {
          if (v < 2.0 || v != std::floor(v) || v > 1e6) {
            throw ScenarioError("values", fmt::format("node count {} is not an integer >= 2", v));
          }
          p.scenario.nodeCount = static_cast<std::uint32_t>(v);
        }
        try {
          Validate(p.scenario);
        } catch (const ScenarioError& e) {
          throw ScenarioError(e.field(), fmt::format("{} at {} = {}, seed {}", e.what(), AxisName(spec.axis), v, seed));
        }
        points.push_back(std::move(p));
      }
    }
  }
  return points;
}

std::vector<SweepRow> RunSweepSerial(const std::vector<SweepPoint>& points) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    rows.push_back(SweepRow{p, RunScenario(p.scenario)});
  }
  return rows;
}

std::vector<SweepRow> RunSweepParallel(const std::vector<SweepPoint>& points, int threads) {
  std::vector<RunResult> results(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  const auto count = static_cast<std::int64_t>(points.size());
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      results[i] = RunScenario(points[i].scenario);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows.push_back(SweepRow{points[i], std::move(results[i])});
  }
  return rows;
}

std::vector<std::pair<std::string, std::optional<double>>> MetricColumns(const RunResult& result) {
  const MetricsReport& r = result.report;
  const ProtocolCounters& c = result.counters;
  auto num = [](auto v) { return std::optional<double>(static_cast<double>(v)); };
  std::vector<std::pair<std::string, std::optional<double>>> cols = {
      {"sent", num(r.sent)},
      {"delivered", num(r.delivered)},
      {"dropped", num(r.dropped)},
      {"in_flight", num(r.inFlight)},
  };
  for (std::size_t i = 0; i < kDropCauseCount; ++i) {
    cols.emplace_back(fmt::format("drop_{}", DropCauseName(static_cast<DropCause>(i))), num(r.dropBreakdown[i]));
  }
  cols.emplace_back("control_tx", num(r.controlTransmissions));
  cols.emplace_back("data_tx", num(r.dataTransmissions));
  for (std::size_t t = 0; t < kPacketTypeCount; ++t) {
    if (static_cast<PacketType>(t) == PacketType::Data) {
      continue;  // already data_tx
    }
    std::string name(PacketTypeName(static_cast<PacketType>(t)));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::tolower(ch); });
    cols.emplace_back(name + "_tx", num(r.transmissions[t]));
  }
  cols.emplace_back("throughput_kbps", r.throughputKbps);
  cols.emplace_back("avg_delay_s", r.avgDelay);
  cols.emplace_back("pdr", r.pdr);
  cols.emplace_back("loss_ratio", r.lossRatio);
  cols.emplace_back("nrl", r.nrl);
  cols.emplace_back("network_energy_j", r.FinalNetworkJoules());
  cols.emplace_back("routing_energy_j", r.FinalRoutingJoules());
  cols.emplace_back("discovery_starts", num(c.discoveryStarts));
  cols.emplace_back("discovery_retries", num(c.discoveryRetries));
  cols.emplace_back("discovery_failures", num(c.discoveryFailures));
  cols.emplace_back("repair_starts", num(c.repairStarts));
  cols.emplace_back("repair_successes", num(c.repairSuccesses));
  cols.emplace_back("repair_failures", num(c.repairFailures));
  cols.emplace_back("link_breaks", num(c.linkBreaks));
  cols.emplace_back("failovers", num(c.failovers));
  cols.emplace_back("replenishments", num(c.replenishments));
  return cols;
}

namespace {

std::string Cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string("NA"); }

void WriteHeaderRow(std::ostream& out, const Scenario& scenario) {
  std::vector<std::string> names = {"axis", "value"};
  for (const auto& [k, v] : DescribeParameters(scenario)) {
    names.push_back(k);
  }
  for (const auto& [k, v] : MetricColumns(RunResult{})) {
    names.push_back(k);
  }
  names.emplace_back("trace_digest");
  out << fmt::format("{}\n", fmt::join(names, ","));
}

void WriteRow(std::ostream& out, std::string_view axis, std::string_view value, const Scenario& scenario,
              const RunResult& result) {
  std::vector<std::string> cells = {std::string(axis), std::string(value)};
  for (const auto& [k, v] : DescribeParameters(scenario)) {
    cells.push_back(v);
  }
  for (const auto& [k, v] : MetricColumns(result)) {
    cells.push_back(Cell(v));
  }
  cells.push_back(fmt::format("{:016x}", result.traceDigest));
  out << fmt::format("{}\n", fmt::join(cells, ","));
}

void WriteParameterComments(std::ostream& out, const Scenario& scenario) {
  for (const auto& [k, v] : DescribeParameters(scenario)) {
    out << "# " << k << " = " << v << '\n';
  }
  for (const auto& f : scenario.flows) {
    out << fmt::format("# flow = {} {} {} {} {} {}\n", f.src, f.dest, f.payload, f.interval, f.start, f.stop);
  }
  for (const auto& p : scenario.placements) {
    out << fmt::format("# place = {} {} {}\n", p.node, p.position.x, p.position.y);
  }
  for (const auto& m : scenario.moves) {
    out << fmt::format("# move = {} {} {} {} {}\n", m.node, m.depart, m.to.x, m.to.y, m.speed);
  }
  for (const auto& k : scenario.kills) {
    out << fmt::format("# kill = {} {}\n", k.node, k.at);
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::optional<double> ParseCell(const std::string& s) {
  if (s == "NA") {
    return std::nullopt;
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("not a number: '{}'", s));
  }
  return v;
}

}  // namespace

void WriteSweepCsv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  WriteParameterComments(out, spec.base);
  out << "# axis = " << AxisName(spec.axis) << '\n';
  out << fmt::format("# values = {}\n", fmt::join(spec.values, " "));
  out << fmt::format("# seeds = {}\n", fmt::join(spec.seeds, " "));
  WriteHeaderRow(out, spec.base);
  for (const auto& row : rows) {
    WriteRow(out, AxisName(spec.axis), fmt::format("{}", row.point.value), row.point.scenario, row.result);
  }
}

void WriteRunCsv(std::ostream& out, const Scenario& scenario, const RunResult& result) {
  WriteParameterComments(out, scenario);
  WriteHeaderRow(out, scenario);
  WriteRow(out, "none", "0", scenario, result);
}

void WriteEnergyCsv(std::ostream& out, const MetricsReport& report) {
  out << "time,network_J,routing_J\n";
  for (const auto& e : report.energySeries) {
    out << fmt::format("{},{},{}\n", e.time, e.networkJoules, e.routingJoules);
  }
}

CsvTable ReadCsv(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (line.front() == '#') {
      t.comments.push_back(line);
      continue;
    }
    auto cells = SplitCsv(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) {
        throw std::runtime_error(fmt::format("row has {} cells, header has {}", cells.size(), t.header.size()));
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.header.empty()) {
    throw std::runtime_error("no header row");
  }
  return t;
}

MetricSummary Summarize(const std::vector<double>& samples) {
  MetricSummary s;
  s.n = samples.size();
  if (s.n == 0) {
    return s;
  }
  double sum = 0.0;
  for (double x : samples) {
    sum += x;
  }
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double sq = 0.0;
    for (double x : samples) {
      sq += (x - s.mean) * (x - s.mean);
    }
    s.stddev = std::sqrt(sq / static_cast<double>(s.n - 1));
  }
  return s;
}

namespace {

using Samples = std::map<std::pair<double, std::string>, std::map<std::string, std::vector<double>>>;

SummaryTable Reduce(const Samples& samples, const std::vector<std::string>& metricOrder) {
  SummaryTable table;
  for (const auto& [key, metrics] : samples) {
    auto& out = table[key];
    for (const auto& name : metricOrder) {
      auto it = metrics.find(name);
      out[name] = Summarize(it == metrics.end() ? std::vector<double>{} : it->second);
    }
  }
  return table;
}

std::vector<std::string> MetricNames() {
  std::vector<std::string> names;
  for (const auto& [k, v] : MetricColumns(RunResult{})) {
    names.push_back(k);
  }
  return names;
}

}  // namespace

SummaryTable Summarize(const std::vector<CsvTable>& tables) {
  const auto names = MetricNames();
  Samples samples;
  std::string axis;
  for (const auto& t : tables) {
    auto column = [&](const std::string& name) {
      auto it = std::find(t.header.begin(), t.header.end(), name);
      if (it == t.header.end()) {
        throw std::runtime_error(fmt::format("missing column '{}'", name));
      }
      return static_cast<std::size_t>(it - t.header.begin());
    };
    const std::size_t axisCol = column("axis");
    const std::size_t valueCol = column("value");
    const std::size_t protoCol = column("protocol");
    std::vector<std::size_t> metricCols;
    for (const auto& n : names) {
      metricCols.push_back(column(n));
    }
    for (const auto& row : t.rows) {
      if (axis.empty()) {
        axis = row[axisCol];
      } else if (axis != row[axisCol]) {
        throw std::runtime_error(fmt::format("cannot merge axis '{}' with '{}'", axis, row[axisCol]));
      }
      const auto value = ParseCell(row[valueCol]);
      auto& bucket = samples[{value.value_or(0.0), row[protoCol]}];
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (auto v = ParseCell(row[metricCols[i]])) {
          bucket[names[i]].push_back(*v);
        }
      }
    }
  }
  return Reduce(samples, names);
}

SummaryTable Summarize(const std::vector<SweepRow>& rows) {
  const auto names = MetricNames();
  Samples samples;
  for (const auto& row : rows) {
    auto& bucket = samples[{row.point.value, std::string(ProtocolName(row.point.protocol))}];
    for (const auto& [k, v] : MetricColumns(row.result)) {
      if (v) {
        bucket[k].push_back(*v);
      }
    }
  }
  return Reduce(samples, names);
}

void WriteSummaryCsv(std::ostream& out, const SummaryTable& table) {
  out << "value,protocol,metric,n,mean,stddev\n";
  for (const auto& [key, metrics] : table) {
    for (const auto& name : MetricNames()) {
      const MetricSummary& s = metrics.at(name);
      if (s.n == 0) {
        out << fmt::format("{},{},{},0,NA,NA\n", key.first, key.second, name);
      } else {
        out << fmt::format("{},{},{},{},{},{}\n", key.first, key.second, name, s.n, s.mean, s.stddev);
      }
    }
  }
}

void WriteReport(std::ostream& out, const SummaryTable& table) {
  std::set<double> values;
  std::set<std::string> protocols;
  for (const auto& [key, m] : table) {
    values.insert(key.first);
    protocols.insert(key.second);
  }
  for (const auto& name : MetricNames()) {
    out << fmt::format("== {} ==\n{:>10}", name, "value");
    for (const auto& p : protocols) {
      out << fmt::format(" {:>26}", p);
    }
    out << '\n';
    for (double v : values) {
      out << fmt::format("{:>10}", v);
      for (const auto& p : protocols) {
        auto it = table.find({v, p});
        if (it == table.end() || it->second.at(name).n == 0) {
          out << fmt::format(" {:>26}", "NA");
        } else {
          const MetricSummary& s = it->second.at(name);
          out << fmt::format(" {:>26}", fmt::format("{:.6g} +- {:.3g} (n={})", s.mean, s.stddev, s.n));
        }
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace manet
