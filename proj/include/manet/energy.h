#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "manet/types.h"

namespace manet {

struct EnergyParams {
  double txPower = 0.660;  // W
  double rxPower = 0.395;  // W
  double initial = 10.0;   // J
};

enum class Direction : std::uint8_t { Tx, Rx };
enum class EnergyClass : std::uint8_t { Control, Data };

/// Per-node accounts. Amounts are integer picojoules so that every identity
/// between the counters holds exactly rather than up to rounding.
struct EnergyState {
  std::int64_t remaining = 0;
  std::int64_t consumedTx = 0;
  std::int64_t consumedRx = 0;
  std::int64_t consumedControl = 0;
  std::int64_t consumedData = 0;
  bool alive = true;

  std::int64_t Consumed() const { return consumedTx + consumedRx; }
};

inline constexpr double kPicojoulesPerJoule = 1e12;
inline double ToJoules(std::int64_t pj) { return static_cast<double>(pj) / kPicojoulesPerJoule; }

class EnergyLedger {
 public:
  EnergyLedger(std::size_t nodeCount, const EnergyParams& params);

  /// Charges power(direction) x duration, clamped to what is left. Returns the
  /// remaining energy in joules. A node that reaches zero dies; debits on dead
  /// nodes are ignored and counted.
  double Debit(NodeId node, Direction direction, Seconds duration, EnergyClass cls);

  /// Forced failure (scripted scenarios). Remaining energy is left untouched.
  void Kill(NodeId node);

  bool Alive(NodeId node) const { return m_states[node].alive; }
  const EnergyState& State(NodeId node) const { return m_states[node]; }
  std::size_t NodeCount() const { return m_states.size(); }
  std::int64_t InitialPj() const { return m_initialPj; }
  std::uint64_t IgnoredDebits() const { return m_ignoredDebits; }

  std::int64_t NetworkConsumedPj() const;
  std::int64_t RoutingConsumedPj() const;

  /// Invoked once per node when it dies (depletion or Kill).
  void OnDeath(std::function<void(NodeId)> callback) { m_onDeath = std::move(callback); }

  const EnergyParams& Params() const { return m_params; }

 private:
  void MarkDead(NodeId node);

  EnergyParams m_params;
  std::int64_t m_initialPj;
  std::vector<EnergyState> m_states;
  std::uint64_t m_ignoredDebits = 0;
  std::function<void(NodeId)> m_onDeath;
};

}  // namespace manet
