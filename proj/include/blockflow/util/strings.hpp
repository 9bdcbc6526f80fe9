#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blockflow::util {

/// Splits on a single character; empty fields are kept.
std::vector<std::string> split(std::string_view text, char sep);

/// Joins with a separator.
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Edit distance between two labels, used for "did you mean" suggestions.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Picks the candidate closest to `needle`, or empty if none is close enough
/// (distance must be at most half the needle length, minimum 2).
std::string nearestCandidate(std::string_view needle,
                             const std::vector<std::string>& candidates);

/// Parses a "block.port" reference. Returns false if the text has no '.'
/// separator or the port is not a non-negative integer.
bool parsePortRef(std::string_view text, std::string& block, int& port);

}  // namespace blockflow::util
