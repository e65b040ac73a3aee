#pragma once

// Event trace. One line per event:
//   <time> <node> <event> <packet-id> <detail...>
// time has 9 decimals, node and packet-id are "-" when not applicable. The
// field order is fixed; tools and golden files rely on it.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "manet/engine.h"
#include "manet/types.h"

namespace manet {

inline constexpr NodeId kNoNode = kBroadcast;

class Tracer {
 public:
  Tracer() = default;
  /// sink may be null; keepLines retains every line in memory.
  Tracer(bool enabled, std::ostream* sink, bool keepLines)
      : m_enabled(enabled), m_sink(sink), m_keepLines(keepLines) {}

  bool Enabled() const { return m_enabled; }

  template <typename... Args>
  void Record(Seconds t, NodeId node, std::string_view event, std::uint64_t packetId,
              fmt::format_string<Args...> detail, Args&&... args) {
    if (!m_enabled) {
      return;
    }
    m_buffer.clear();
    auto out = std::back_inserter(m_buffer);
    fmt::format_to(out, "{:.9f} ", t);
    if (node == kNoNode) {
      fmt::format_to(out, "- ");
    } else {
      fmt::format_to(out, "{} ", node);
    }
    fmt::format_to(out, "{} ", event);
    if (packetId == 0) {
      fmt::format_to(out, "-");
    } else {
      fmt::format_to(out, "{}", packetId);
    }
    if (fmt::string_view(detail).size() > 0) {
      m_buffer.push_back(' ');
      fmt::format_to(out, detail, std::forward<Args>(args)...);
    }
    Emit();
  }

  std::uint64_t Digest() const { return m_digest; }
  std::uint64_t LineCount() const { return m_lineCount; }
  const std::vector<std::string>& Lines() const { return m_lines; }

 private:
  void Emit();

  bool m_enabled = false;
  std::ostream* m_sink = nullptr;
  bool m_keepLines = false;
  std::string m_buffer;
  std::vector<std::string> m_lines;
  std::uint64_t m_digest = 0xcbf29ce484222325ULL;
  std::uint64_t m_lineCount = 0;
};

/// Splits a trace line into its whitespace-separated fields.
std::vector<std::string_view> SplitFields(std::string_view line);

}  // namespace manet
