#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

namespace edgeids {

/// One `key = value` line; line is 1-based for error reporting.
struct KvEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Parses line-oriented `key = value` text. `#` starts a comment, blank
/// lines are skipped, keys and values are trimmed. Used by both the schema
/// mapping file and the run configuration file.
std::vector<KvEntry> parse_kv(std::istream& in);
std::vector<KvEntry> parse_kv_file(const std::string& path);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

} // namespace edgeids
