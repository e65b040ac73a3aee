#include "manet/energy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manet {

EnergyLedger::EnergyLedger(std::size_t nodeCount, const EnergyParams& params)
    : m_params(params), m_initialPj(std::llround(params.initial * kPicojoulesPerJoule)) {
  m_states.resize(nodeCount);
  for (auto& s : m_states) {
    s.remaining = m_initialPj;
  }
}

double EnergyLedger::Debit(NodeId node, Direction direction, Seconds duration, EnergyClass cls) {
  if (duration < 0.0) {
    throw std::invalid_argument("negative debit duration");
  }
  EnergyState& s = m_states.at(node);
  if (!s.alive) {
    ++m_ignoredDebits;
    return 0.0;
  }
  const double power = direction == Direction::Tx ? m_params.txPower : m_params.rxPower;
  const std::int64_t requested = std::llround(power * duration * kPicojoulesPerJoule);
  const std::int64_t amount = std::min(requested, s.remaining);
  s.remaining -= amount;
  (direction == Direction::Tx ? s.consumedTx : s.consumedRx) += amount;
  (cls == EnergyClass::Control ? s.consumedControl : s.consumedData) += amount;
  if (s.remaining == 0) {
    MarkDead(node);
  }
  return ToJoules(s.remaining);
}

void EnergyLedger::Kill(NodeId node) {
  if (m_states.at(node).alive) {
    MarkDead(node);
  }
}

void EnergyLedger::MarkDead(NodeId node) {
  m_states[node].alive = false;
  if (m_onDeath) {
    m_onDeath(node);
  }
}

std::int64_t EnergyLedger::NetworkConsumedPj() const {
  std::int64_t total = 0;
  for (const auto& s : m_states) {
    total += s.Consumed();
  }
  return total;
}

std::int64_t EnergyLedger::RoutingConsumedPj() const {
  std::int64_t total = 0;
  for (const auto& s : m_states) {
    total += s.consumedControl;
  }
  return total;
}

}  // namespace manet
