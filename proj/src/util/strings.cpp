#include "blockflow/util/strings.hpp"

#include <algorithm>
#include <cctype>

namespace blockflow::util {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(begin));
      return out;
    }
    out.emplace_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t insertOrDelete = std::min(row[j], row[j - 1]) + 1;
      const std::size_t substitute = prev + (a[i - 1] == b[j - 1] ? 0 : 1);
      prev = row[j];
      row[j] = std::min(insertOrDelete, substitute);
    }
  }
  return row[b.size()];
}

std::string nearestCandidate(std::string_view needle,
                             const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t bestDistance = std::max<std::size_t>(2, needle.size() / 2);
  for (const auto& candidate : candidates) {
    const std::size_t d = levenshtein(needle, candidate);
    if (d <= bestDistance) {
      bestDistance = d;
      best = candidate;
    }
  }
  return best;
}

bool parsePortRef(std::string_view text, std::string& block, int& port) {
  const std::size_t pos = text.rfind('.');
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == text.size()) {
    return false;
  }
  const std::string_view portText = text.substr(pos + 1);
  if (!std::all_of(portText.begin(), portText.end(),
                   [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return false;
  }
  block.assign(text.substr(0, pos));
  port = 0;
  for (char c : portText) port = port * 10 + (c - '0');
  return true;
}

}  // namespace blockflow::util
