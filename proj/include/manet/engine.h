#pragma once

// Discrete-event core: virtual clock, (time, insertion) ordered queue with
// cancellable handles, and labelled random streams derived from one seed.

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "manet/types.h"

namespace manet {

/// Raised for simulator misuse (scheduling in the past, corrupt state).
/// A run that hits one of these is aborted.
class SimulationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EventKind : std::uint8_t { FrameDelivery, Timer, TrafficTick, MobilityWaypoint };

class EventHandle {
 public:
  EventHandle() = default;
  explicit EventHandle(std::uint64_t seq) : m_seq(seq) {}
  bool IsValid() const { return m_seq != 0; }
  std::uint64_t Seq() const { return m_seq; }

 private:
  std::uint64_t m_seq = 0;
};

class Simulator {
 public:
  /// Times closer than this are the same instant and fall back to FIFO order.
  static constexpr double kTimeResolution = 1e-9;

  EventHandle Schedule(Seconds at, EventKind kind, std::function<void()> action);
  EventHandle ScheduleIn(Seconds delay, EventKind kind, std::function<void()> action) {
    return Schedule(m_now + delay, kind, std::move(action));
  }
  /// Cancelling an already-fired or invalid handle is a no-op.
  void Cancel(EventHandle handle);

  /// Processes every event with time <= end, then leaves the clock at end.
  std::size_t RunUntil(Seconds end);

  Seconds Now() const { return m_now; }
  std::size_t Pending() const { return m_live.size(); }
  std::uint64_t Processed() const { return m_processed; }

 private:
  struct Entry {
    std::int64_t tick;
    std::uint64_t seq;
    Seconds time;
    EventKind kind;
    std::function<void()> action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
    }
  };
  static std::int64_t ToTick(Seconds t) { return std::llround(t / kTimeResolution); }

  std::vector<Entry> m_queue;  // binary heap ordered by Later
  std::unordered_set<std::uint64_t> m_live;
  Seconds m_now = 0.0;
  std::uint64_t m_nextSeq = 1;
  std::uint64_t m_processed = 0;
};

/// Deterministic generator keyed by (master seed, label). Streams with
/// different labels never share draws, so adding a consumer cannot perturb
/// another subsystem's sequence.
class RngStream {
 public:
  RngStream(std::uint64_t masterSeed, std::string_view label);

  /// Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t Below(std::uint64_t n);

  const std::string& Label() const { return m_label; }

 private:
  std::string m_label;
  std::mt19937_64 m_gen;
};

std::uint64_t Fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace manet
