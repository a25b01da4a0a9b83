#include "edgeids/kvfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "edgeids/errors.hpp"

namespace edgeids {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<KvEntry> parse_kv(std::istream& in) {
  std::vector<KvEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected `key = value`, got `" +
                        stripped + "`");
    KvEntry e;
    e.key = trim(stripped.substr(0, eq));
    e.value = trim(stripped.substr(eq + 1));
    e.line = lineno;
    if (e.key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<KvEntry> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return parse_kv(in);
}

} // namespace edgeids
