#include "manet/trace.h"

#include <ostream>

namespace manet {

void Tracer::Emit() {
  m_buffer.push_back('\n');
  m_digest = Fnv1a64(m_buffer, m_digest);
  ++m_lineCount;
  if (m_sink != nullptr) {
    m_sink->write(m_buffer.data(), static_cast<std::streamsize>(m_buffer.size()));
  }
  if (m_keepLines) {
    m_lines.emplace_back(m_buffer.data(), m_buffer.size() - 1);
  }
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') {
      ++j;
    }
    if (j > i) {
      fields.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return fields;
}

}  // namespace manet
