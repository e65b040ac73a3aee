#include "manet/scenario.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace manet {

std::string_view ProtocolName(ProtocolKind kind) { return kind == ProtocolKind::Aodv ? "aodv" : "maodv"; }

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
      ++j;
    }
    if (j > i) {
      out.push_back(s.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

double ToDouble(const std::string& field, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ScenarioError(field, fmt::format("expected a number, got '{}'", text));
  }
  return v;
}

std::uint64_t ToUint(const std::string& field, std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ScenarioError(field, fmt::format("expected a non-negative integer, got '{}'", text));
  }
  return v;
}

std::uint32_t ToU32(const std::string& field, std::string_view text) {
  const std::uint64_t v = ToUint(field, text);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ScenarioError(field, "value out of range");
  }
  return static_cast<std::uint32_t>(v);
}

bool ToBool(const std::string& field, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no") {
    return false;
  }
  throw ScenarioError(field, fmt::format("expected true/false, got '{}'", text));
}

struct Field {
  std::string name;
  std::function<void(Scenario&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

#define MANET_DOUBLE(key, member)                                                          \
  Field {                                                                                  \
    key, [](Scenario& s, std::string_view v) { s.member = ToDouble(key, v); },              \
        [](const Scenario& s) { return fmt::format("{}", s.member); }                      \
  }
#define MANET_U32(key, member)                                                             \
  Field {                                                                                  \
    key, [](Scenario& s, std::string_view v) { s.member = ToU32(key, v); },                 \
        [](const Scenario& s) { return fmt::format("{}", s.member); }                      \
  }
#define MANET_BOOL(key, member)                                                            \
  Field {                                                                                  \
    key, [](Scenario& s, std::string_view v) { s.member = ToBool(key, v); },                \
        [](const Scenario& s) { return std::string(s.member ? "true" : "false"); }         \
  }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Field{"id", [](Scenario& s, std::string_view v) { s.id = std::string(v); },
            [](const Scenario& s) { return s.id; }},
      Field{"protocol",
            [](Scenario& s, std::string_view v) {
              if (v == "aodv") {
                s.protocol = ProtocolKind::Aodv;
              } else if (v == "maodv") {
                s.protocol = ProtocolKind::Maodv;
              } else {
                throw ScenarioError("protocol", fmt::format("expected aodv or maodv, got '{}'", v));
              }
            },
            [](const Scenario& s) { return std::string(ProtocolName(s.protocol)); }},
      Field{"seed", [](Scenario& s, std::string_view v) { s.seed = ToUint("seed", v); },
            [](const Scenario& s) { return fmt::format("{}", s.seed); }},
      MANET_U32("nodes", nodeCount),
      MANET_DOUBLE("duration", duration),
      MANET_DOUBLE("width", mobility.width),
      MANET_DOUBLE("height", mobility.height),
      MANET_DOUBLE("v_min", mobility.vMin),
      MANET_DOUBLE("v_max", mobility.vMax),
      MANET_DOUBLE("pause_time", mobility.pauseTime),
      MANET_DOUBLE("range", radio.range),
      MANET_DOUBLE("bandwidth", radio.bandwidth),
      MANET_DOUBLE("propagation_delay", radio.propagationDelayPerMeter),
      MANET_DOUBLE("loss_probability", radio.lossProbability),
      MANET_DOUBLE("tx_power", energy.txPower),
      MANET_DOUBLE("rx_power", energy.rxPower),
      MANET_DOUBLE("initial_energy", energy.initial),
      MANET_DOUBLE("energy_sample_interval", energySampleInterval),
      MANET_U32("rreq_retries", protocolParams.rreqRetries),
      MANET_DOUBLE("hello_interval", protocolParams.helloInterval),
      MANET_U32("allowed_hello_loss", protocolParams.allowedHelloLoss),
      MANET_DOUBLE("route_lifetime", protocolParams.routeLifetime),
      MANET_DOUBLE("rreq_id_cache_ttl", protocolParams.rreqIdCacheTtl),
      MANET_DOUBLE("discovery_timeout", protocolParams.discoveryTimeout),
      MANET_U32("queue_capacity", protocolParams.queueCapacity),
      MANET_U32("n0", protocolParams.n0),
      MANET_U32("s0", protocolParams.s0),
      MANET_U32("rreq_slack", protocolParams.rreqSlack),
      MANET_U32("rreq_copy_limit", protocolParams.rreqCopyLimit),
      MANET_U32("diameter_estimate", protocolParams.diameterEstimate),
      MANET_BOOL("superset_pruning", protocolParams.supersetPruning),
      MANET_BOOL("degree_tiebreak", protocolParams.degreeTieBreak),
      MANET_U32("flows", traffic.flowCount),
      MANET_U32("payload", traffic.payload),
      MANET_DOUBLE("interval", traffic.interval),
      MANET_DOUBLE("flow_start_min", traffic.startMin),
      MANET_DOUBLE("flow_start_max", traffic.startMax),
  };
  return fields;
}

#undef MANET_DOUBLE
#undef MANET_U32
#undef MANET_BOOL

void ExpectArity(const std::string& key, const std::vector<std::string_view>& t, std::size_t n, const char* usage) {
  if (t.size() != n) {
    throw ScenarioError(key, fmt::format("expected '{} = {}'", key, usage));
  }
}

}  // namespace

Scenario ParseScenario(std::istream& in) {
  Scenario s;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(fmt::format("line {}", lineNo), "expected 'key = value'");
    }
    const std::string key(Trim(view.substr(0, eq)));
    const std::string_view value = Trim(view.substr(eq + 1));
    const auto t = Tokens(value);
    if (key == "flow") {
      ExpectArity(key, t, 6, "src dest payload interval start stop");
      s.flows.push_back(FlowSpec{ToU32(key, t[0]), ToU32(key, t[1]), ToU32(key, t[2]), ToDouble(key, t[3]),
                                 ToDouble(key, t[4]), ToDouble(key, t[5])});
    } else if (key == "place") {
      ExpectArity(key, t, 3, "node x y");
      s.placements.push_back(Placement{ToU32(key, t[0]), {ToDouble(key, t[1]), ToDouble(key, t[2])}});
    } else if (key == "move") {
      ExpectArity(key, t, 5, "node depart x y speed");
      s.moves.push_back(ScriptedMove{ToU32(key, t[0]), ToDouble(key, t[1]), {ToDouble(key, t[2]), ToDouble(key, t[3])},
                                     ToDouble(key, t[4])});
    } else if (key == "kill") {
      ExpectArity(key, t, 2, "node time");
      s.kills.push_back(ScriptedKill{ToU32(key, t[0]), ToDouble(key, t[1])});
    } else {
      const auto& fields = Fields();
      auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.name == key; });
      if (it == fields.end()) {
        throw ScenarioError(key, "unknown key");
      }
      if (value.empty()) {
        throw ScenarioError(key, "missing value");
      }
      it->set(s, value);
    }
  }
  Validate(s);
  return s;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("file", fmt::format("cannot open '{}'", path));
  }
  return ParseScenario(in);
}

void Validate(const Scenario& s) {
  auto require = [](bool ok, const char* field, const char* message) {
    if (!ok) {
      throw ScenarioError(field, message);
    }
  };
  require(!s.id.empty() && s.id.find_first_of(" ,\t") == std::string::npos, "id",
          "must be non-empty without spaces or commas");
  require(s.nodeCount >= 2, "nodes", "need at least 2 nodes");
  require(s.duration > 0.0, "duration", "must be positive");
  require(s.mobility.width > 0.0, "width", "must be positive");
  require(s.mobility.height > 0.0, "height", "must be positive");
  require(s.mobility.vMin > 0.0, "v_min", "must be positive");
  require(s.mobility.vMax >= s.mobility.vMin, "v_max", "must be >= v_min");
  require(s.mobility.pauseTime >= 0.0, "pause_time", "must be non-negative");
  require(s.radio.range > 0.0, "range", "must be positive");
  require(s.radio.bandwidth > 0.0, "bandwidth", "must be positive");
  require(s.radio.propagationDelayPerMeter >= 0.0, "propagation_delay", "must be non-negative");
  require(s.radio.lossProbability >= 0.0 && s.radio.lossProbability <= 1.0, "loss_probability",
          "must lie in [0, 1]");
  require(s.energy.rxPower > 0.0, "rx_power", "must be positive");
  require(s.energy.txPower > s.energy.rxPower, "tx_power", "must exceed rx_power");
  require(s.energy.initial > 0.0, "initial_energy", "must be positive");
  require(s.energySampleInterval > 0.0, "energy_sample_interval", "must be positive");
  const ProtocolParams& p = s.protocolParams;
  require(p.helloInterval > 0.0, "hello_interval", "must be positive");
  require(p.allowedHelloLoss > 0, "allowed_hello_loss", "must be positive");
  require(p.routeLifetime > 0.0, "route_lifetime", "must be positive");
  require(p.rreqIdCacheTtl > 0.0, "rreq_id_cache_ttl", "must be positive");
  require(p.discoveryTimeout > 0.0, "discovery_timeout", "must be positive");
  require(p.queueCapacity > 0, "queue_capacity", "must be positive");
  require(p.n0 >= 2, "n0", "must be at least 2");
  require(p.s0 > 0 && p.s0 < p.n0, "s0", "must satisfy 0 < s0 < n0");
  require(p.diameterEstimate > 0, "diameter_estimate", "must be positive");
  if (s.flows.empty()) {
    require(s.traffic.flowCount > 0, "flows", "need at least one flow");
    require(static_cast<std::uint64_t>(s.traffic.flowCount) <=
                static_cast<std::uint64_t>(s.nodeCount) * (s.nodeCount - 1),
            "flows", "more flows than distinct node pairs");
  }
  require(s.traffic.payload > 0, "payload", "must be positive");
  require(s.traffic.interval > 0.0, "interval", "must be positive");
  require(s.traffic.startMin >= 0.0 && s.traffic.startMax > s.traffic.startMin, "flow_start_max",
          "need 0 <= flow_start_min < flow_start_max");
  for (const auto& f : s.flows) {
    require(f.src < s.nodeCount && f.dest < s.nodeCount, "flow", "endpoint out of range");
    require(f.src != f.dest, "flow", "source equals destination");
    require(f.payload > 0, "flow", "payload must be positive");
    require(f.interval > 0.0, "flow", "interval must be positive");
    require(f.start >= 0.0, "flow", "start must be non-negative");
  }
  for (const auto& pl : s.placements) {
    require(pl.node < s.nodeCount, "place", "node out of range");
    require(pl.position.x >= 0.0 && pl.position.x <= s.mobility.width && pl.position.y >= 0.0 &&
                pl.position.y <= s.mobility.height,
            "place", "position outside the area");
  }
  for (const auto& m : s.moves) {
    const bool placed = std::any_of(s.placements.begin(), s.placements.end(),
                                    [&](const Placement& pl) { return pl.node == m.node; });
    require(m.node < s.nodeCount && placed, "move", "node must exist and be placed");
    require(m.speed > 0.0 && m.depart >= 0.0, "move", "needs depart >= 0 and speed > 0");
    require(m.to.x >= 0.0 && m.to.x <= s.mobility.width && m.to.y >= 0.0 && m.to.y <= s.mobility.height, "move",
            "target outside the area");
  }
  for (const auto& k : s.kills) {
    require(k.node < s.nodeCount && k.at >= 0.0, "kill", "node out of range or negative time");
  }
}

std::vector<std::pair<std::string, std::string>> DescribeParameters(const Scenario& scenario) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : Fields()) {
    out.emplace_back(f.name, f.get(scenario));
  }
  return out;
}

void WriteScenario(std::ostream& out, const Scenario& s) {
  for (const auto& [k, v] : DescribeParameters(s)) {
    out << k << " = " << v << '\n';
  }
  for (const auto& f : s.flows) {
    out << fmt::format("flow = {} {} {} {} {} {}\n", f.src, f.dest, f.payload, f.interval, f.start, f.stop);
  }
  for (const auto& p : s.placements) {
    out << fmt::format("place = {} {} {}\n", p.node, p.position.x, p.position.y);
  }
  for (const auto& m : s.moves) {
    out << fmt::format("move = {} {} {} {} {}\n", m.node, m.depart, m.to.x, m.to.y, m.speed);
  }
  for (const auto& k : s.kills) {
    out << fmt::format("kill = {} {}\n", k.node, k.at);
  }
}

}  // namespace manet
