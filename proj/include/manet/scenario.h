#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "manet/energy.h"
#include "manet/mobility.h"
#include "manet/radio.h"
#include "manet/routing_agent.h"
#include "manet/traffic.h"

namespace manet {

enum class ProtocolKind : std::uint8_t { Aodv, Maodv };
std::string_view ProtocolName(ProtocolKind kind);

/// Invalid configuration. field() names the offending key.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), m_field(std::move(field)) {}
  const std::string& field() const { return m_field; }

 private:
  std::string m_field;
};

struct Placement {
  NodeId node = 0;
  Vec2 position;
};

struct ScriptedMove {
  NodeId node = 0;
  Seconds depart = 0.0;
  Vec2 to;
  double speed = 1.0;
};

struct ScriptedKill {
  NodeId node = 0;
  Seconds at = 0.0;
};

struct Scenario {
  std::string id = "scenario";
  std::uint32_t nodeCount = 20;
  RadioParams radio;
  MobilityParams mobility;
  EnergyParams energy;
  ProtocolKind protocol = ProtocolKind::Aodv;
  ProtocolParams protocolParams;
  FlowGenerator traffic;
  std::vector<FlowSpec> flows;  // explicit flows replace generated ones
  Seconds duration = 120.0;
  std::uint64_t seed = 1;
  Seconds energySampleInterval = 1.0;

  // Scripted topology. A placed node is static apart from its moves.
  std::vector<Placement> placements;
  std::vector<ScriptedMove> moves;
  std::vector<ScriptedKill> kills;
};

/// Reads the `key = value` format. Unknown keys and malformed values throw
/// ScenarioError. The result is validated.
Scenario ParseScenario(std::istream& in);
Scenario LoadScenario(const std::string& path);

/// Throws ScenarioError naming the first invalid field.
void Validate(const Scenario& scenario);

/// Every scalar parameter as (key, value) in file syntax, defaults included.
std::vector<std::pair<std::string, std::string>> DescribeParameters(const Scenario& scenario);

/// Writes a scenario file that parses back to the same scenario.
void WriteScenario(std::ostream& out, const Scenario& scenario);

}  // namespace manet
