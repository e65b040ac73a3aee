#include "manet/engine.h"

#include <algorithm>

namespace manet {

EventHandle Simulator::Schedule(Seconds at, EventKind kind, std::function<void()> action) {
  const std::int64_t tick = ToTick(at);
  if (!(at >= 0.0) || tick < ToTick(m_now)) {
    throw SimulationFault("event scheduled in the past: t=" + std::to_string(at) +
                          " now=" + std::to_string(m_now));
  }
  const std::uint64_t seq = m_nextSeq++;
  m_queue.push_back(Entry{tick, seq, at, kind, std::move(action)});
  m_live.insert(seq);
  std::push_heap(m_queue.begin(), m_queue.end(), Later{});
  return EventHandle(seq);
}

void Simulator::Cancel(EventHandle handle) {
  if (!handle.IsValid()) {
    return;
  }
  m_live.erase(handle.Seq());
}

std::size_t Simulator::RunUntil(Seconds end) {
  if (end < m_now) {
    throw SimulationFault("run_until before current clock");
  }
  const std::int64_t endTick = ToTick(end);
  std::size_t count = 0;
  while (!m_queue.empty() && m_queue.front().tick <= endTick) {
    std::pop_heap(m_queue.begin(), m_queue.end(), Later{});
    Entry entry = std::move(m_queue.back());
    m_queue.pop_back();
    if (m_live.erase(entry.seq) == 0) {
      continue;  // cancelled
    }
    m_now = std::max(m_now, entry.time);
    entry.action();
    ++count;
    ++m_processed;
  }
  m_now = end;
  return count;
}

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t masterSeed, std::string_view label)
    : m_label(label), m_gen(SplitMix64(SplitMix64(masterSeed) ^ Fnv1a64(label))) {}

double RngStream::Uniform() { return static_cast<double>(m_gen() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::Below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("Below(0)");
  }
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw;
  do {
    draw = m_gen();
  } while (draw >= limit);
  return draw % n;
}

}  // namespace manet
