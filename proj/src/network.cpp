#include "manet/network.h"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "manet/aodv.h"
#include "manet/maodv.h"
#include "manet/traffic.h"

namespace manet {

Network::Network(const Scenario& scenario, RunOptions options)
    : m_scenario(scenario),
      m_energy(scenario.nodeCount, scenario.energy),
      m_trace(true, options.traceSink, options.keepTraceLines) {
  Validate(m_scenario);
  BuildSchedules();
  m_channel = std::make_unique<Channel>(m_sim, m_schedules, m_energy, m_ledger, m_trace, m_scenario.radio,
                                        RngStream(m_scenario.seed, "radio"));
  m_services = std::make_unique<NodeServices>(
      NodeServices{m_sim, *m_channel, m_energy, m_ledger, m_trace, m_scenario.protocolParams});

  for (NodeId n = 0; n < m_scenario.nodeCount; ++n) {
    if (m_scenario.protocol == ProtocolKind::Aodv) {
      m_agents.push_back(std::make_unique<AodvAgent>(n, *m_services));
    } else {
      m_agents.push_back(std::make_unique<MaodvAgent>(n, *m_services));
    }
  }
  m_channel->SetReceiver([this](NodeId receiver, const Packet& packet) { m_agents[receiver]->Receive(packet); });
  m_energy.OnDeath([this](NodeId node) {
    m_trace.Record(m_sim.Now(), node, "death", 0, "{}", ToJoules(m_energy.State(node).remaining));
    m_agents[node]->OnDeath();
  });

  if (m_scenario.flows.empty()) {
    RngStream rng(m_scenario.seed, "traffic");
    m_flows = GenerateFlows(m_scenario.nodeCount, m_scenario.traffic, m_scenario.duration, rng);
  } else {
    m_flows = m_scenario.flows;
  }

  WritePreamble();

  for (NodeId n = 0; n < m_scenario.nodeCount; ++n) {
    RngStream rng(m_scenario.seed, fmt::format("hello/{}", n));
    m_agents[n]->Start(rng.Uniform(0.0, m_scenario.protocolParams.helloInterval));
  }
  for (const auto& k : m_scenario.kills) {
    m_sim.Schedule(k.at, EventKind::Timer, [this, node = k.node] {
      m_trace.Record(m_sim.Now(), node, "kill", 0, "");
      m_energy.Kill(node);
    });
  }
  ScheduleTraffic();

  const auto samples = static_cast<std::uint64_t>(std::ceil(m_scenario.duration / m_scenario.energySampleInterval));
  for (std::uint64_t k = 0; k < samples; ++k) {
    const Seconds t = static_cast<double>(k) * m_scenario.energySampleInterval;
    if (t < m_scenario.duration) {
      m_sim.Schedule(t, EventKind::Timer, [this, t] { SampleEnergy(t); });
    }
  }
}

void Network::BuildSchedules() {
  const auto& s = m_scenario;
  m_schedules.resize(s.nodeCount);
  std::vector<bool> placed(s.nodeCount, false);
  for (const auto& p : s.placements) {
    placed[p.node] = true;
    std::vector<WaypointLeg> legs;
    Vec2 at = p.position;
    Seconds freeFrom = 0.0;
    for (const auto& m : s.moves) {
      if (m.node != p.node) {
        continue;
      }
      if (m.depart < freeFrom) {
        throw ScenarioError("move", fmt::format("node {} departs at {} before arriving at its previous target",
                                                m.node, m.depart));
      }
      WaypointLeg leg{at, m.to, m.depart, m.speed, 0.0};
      if (!legs.empty()) {
        legs.back().pauseAfter = m.depart - legs.back().Arrival();
      }
      freeFrom = leg.Arrival();
      at = m.to;
      legs.push_back(leg);
    }
    if (!legs.empty()) {
      legs.back().pauseAfter = std::max(0.0, s.duration - legs.back().Arrival());
    }
    m_schedules[p.node] = MobilitySchedule(p.position, std::move(legs));
  }
  for (NodeId n = 0; n < s.nodeCount; ++n) {
    if (!placed[n]) {
      RngStream rng(s.seed, fmt::format("mobility/{}", n));
      m_schedules[n] = GenerateSchedule(s.mobility, s.duration, rng);
    }
  }
}

void Network::WritePreamble() {
  // Mobility and traffic sections; paired runs must agree on these lines.
  for (NodeId n = 0; n < m_scenario.nodeCount; ++n) {
    const auto& sched = m_schedules[n];
    m_trace.Record(0.0, n, "place", 0, "{:.6f} {:.6f}", sched.Initial().x, sched.Initial().y);
    for (const auto& leg : sched.Legs()) {
      m_trace.Record(0.0, n, "leg", 0, "{:.9f} {:.6f} {:.6f} {:.6f} {:.6f}", leg.depart, leg.end.x, leg.end.y,
                     leg.speed, leg.pauseAfter);
    }
  }
  for (std::size_t i = 0; i < m_flows.size(); ++i) {
    const auto& f = m_flows[i];
    m_trace.Record(0.0, f.src, "flow", 0, "{} {} {} {:.9f} {:.9f} {:.9f}", i, f.dest, f.payload, f.interval, f.start,
                   f.stop);
  }
}

void Network::ScheduleTraffic() {
  for (std::size_t i = 0; i < m_flows.size(); ++i) {
    const auto times = CbrSchedule(m_flows[i]);
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] >= m_scenario.duration) {
        break;
      }
      m_sim.Schedule(times[k], EventKind::TrafficTick,
                     [this, i, k] { EmitData(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k)); });
    }
  }
}

void Network::EmitData(std::uint32_t flow, std::uint32_t seq) {
  const FlowSpec& f = m_flows[flow];
  const Seconds now = m_sim.Now();
  Data d;
  d.uid = m_ledger.RecordSent(flow, seq, f.src, f.dest, f.payload, now);
  d.flow = flow;
  d.seq = seq;
  d.origin = f.src;
  d.dest = f.dest;
  d.payload = f.payload;
  d.sentAt = now;
  m_trace.Record(now, f.src, "send", d.uid, "{} {} {} {}", flow, seq, f.dest, f.payload);
  if (!m_energy.Alive(f.src)) {
    m_trace.Record(now, f.src, "drop", d.uid, "dead_node");
    m_ledger.RecordDropped(d.uid, DropCause::DeadNode);
    return;
  }
  m_agents[f.src]->SendData(std::move(d));
}

void Network::SampleEnergy(Seconds t) {
  m_ledger.RecordEnergySample(
      EnergySample{t, ToJoules(m_energy.NetworkConsumedPj()), ToJoules(m_energy.RoutingConsumedPj())});
}

void Network::RunUntil(Seconds t) {
  if (m_finished) {
    return;
  }
  m_sim.RunUntil(std::min(t, m_scenario.duration));
}

void Network::Finish() {
  if (m_finished) {
    return;
  }
  m_sim.RunUntil(m_scenario.duration);
  SampleEnergy(m_scenario.duration);
  m_finished = true;
}

std::vector<std::string> Network::Audit() const {
  std::vector<std::string> problems;
  const MetricsReport r = Finalize(m_ledger, m_scenario.duration);
  std::uint64_t dropped = 0;
  for (auto c : r.dropBreakdown) {
    dropped += c;
  }
  if (r.sent != r.delivered + dropped + r.inFlight) {
    problems.push_back(fmt::format("packet conservation: sent {} != delivered {} + dropped {} + in flight {}", r.sent,
                                   r.delivered, dropped, r.inFlight));
  }
  std::size_t held = m_channel->DataInTransit();
  for (const auto& a : m_agents) {
    held += a->BufferedData();
  }
  if (held != r.inFlight) {
    problems.push_back(fmt::format("in-flight mismatch: ledger {} vs channel+buffers {}", r.inFlight, held));
  }
  std::int64_t network = 0;
  std::int64_t routing = 0;
  for (NodeId n = 0; n < m_energy.NodeCount(); ++n) {
    const EnergyState& s = m_energy.State(n);
    if (m_energy.InitialPj() - s.remaining != s.Consumed()) {
      problems.push_back(fmt::format("energy ledger of node {} does not close", n));
    }
    if (s.consumedControl + s.consumedData != s.Consumed()) {
      problems.push_back(fmt::format("energy classes of node {} do not sum to the total", n));
    }
    network += s.Consumed();
    routing += s.consumedControl;
  }
  if (network != m_energy.NetworkConsumedPj() || routing != m_energy.RoutingConsumedPj()) {
    problems.push_back("energy totals disagree with per-node accounts");
  }
  for (const auto& e : m_ledger.EnergySeries()) {
    if (e.routingJoules > e.networkJoules) {
      problems.push_back(fmt::format("routing energy exceeds network energy at t={}", e.time));
    }
  }
  return problems;
}

MetricsReport Network::Report() const { return Finalize(m_ledger, m_scenario.duration); }

RunResult RunScenario(const Scenario& scenario, RunOptions options) {
  Network net(scenario, options);
  net.Finish();
  if (auto problems = net.Audit(); !problems.empty()) {
    throw SimulationFault(fmt::format("{} (scenario {}, seed {})", problems.front(), scenario.id, scenario.seed));
  }
  return RunResult{net.Report(), net.Counters(), net.Trace().Digest(), net.Trace().LineCount(), net.Flows()};
}

}  // namespace manet
