#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace edgeids {

/// Streaming reader for comma-separated files with a header row. Handles
/// double-quoted cells (embedded commas, doubled quotes) and CRLF endings.
class CsvReader {
public:
  explicit CsvReader(const std::string& path); // throws DataError if unreadable

  const std::vector<std::string>& header() const { return header_; }

  /// Reads the next data row into `cells`. Returns false at end of file.
  bool next(std::vector<std::string>& cells);

  /// 0-based index of the data row returned by the last next() call.
  std::size_t row_index() const { return row_index_; }

  static void split_line(const std::string& line, std::vector<std::string>& cells);

private:
  std::ifstream in_;
  std::vector<std::string> header_;
  std::string line_;
  std::size_t row_index_ = static_cast<std::size_t>(-1);
};

} // namespace edgeids
