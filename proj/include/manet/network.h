#pragma once
// One simulation run: builds mobility, radio, energy, agents and traffic from a
// scenario and drives them to the configured duration.

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "manet/engine.h"
#include "manet/metrics.h"
#include "manet/radio.h"
#include "manet/routing_agent.h"
#include "manet/scenario.h"
#include "manet/trace.h"

namespace manet {

struct RunOptions {
  std::ostream* traceSink = nullptr;
  bool keepTraceLines = false;
};

class Network {
 public:
  explicit Network(const Scenario& scenario, RunOptions options = {});
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Advances to t (at most the scenario duration).
  void RunUntil(Seconds t);
  /// Runs to the end and takes the final energy sample. Idempotent.
  void Finish();

  /// Conservation checks. Empty when every identity holds.
  std::vector<std::string> Audit() const;
  MetricsReport Report() const;

  const Scenario& GetScenario() const { return m_scenario; }
  Simulator& Sim() { return m_sim; }
  const Channel& GetChannel() const { return *m_channel; }
  const EnergyLedger& Energy() const { return m_energy; }
  const PacketLedger& Ledger() const { return m_ledger; }
  const Tracer& Trace() const { return m_trace; }
  const ProtocolCounters& Counters() const { return m_services->counters; }
  RoutingAgent& Agent(NodeId node) { return *m_agents.at(node); }
  const std::vector<FlowSpec>& Flows() const { return m_flows; }
  const std::vector<MobilitySchedule>& Schedules() const { return m_schedules; }

 private:
  void BuildSchedules();
  void WritePreamble();
  void ScheduleTraffic();
  void EmitData(std::uint32_t flow, std::uint32_t seq);
  void SampleEnergy(Seconds t);

  Scenario m_scenario;
  std::vector<MobilitySchedule> m_schedules;
  Simulator m_sim;
  EnergyLedger m_energy;
  PacketLedger m_ledger;
  Tracer m_trace;
  std::unique_ptr<Channel> m_channel;
  std::unique_ptr<NodeServices> m_services;
  std::vector<std::unique_ptr<RoutingAgent>> m_agents;
  std::vector<FlowSpec> m_flows;
  bool m_finished = false;
};

struct RunResult {
  MetricsReport report;
  ProtocolCounters counters;
  std::uint64_t traceDigest = 0;
  std::uint64_t traceLines = 0;
  std::vector<FlowSpec> flows;
};

/// Runs a validated scenario to completion. Throws SimulationFault when a
/// conservation identity is violated.
RunResult RunScenario(const Scenario& scenario, RunOptions options = {});

}  // namespace manet
