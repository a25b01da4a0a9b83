#include "edgeids/csv.hpp"

#include "edgeids/errors.hpp"

namespace edgeids {

CsvReader::CsvReader(const std::string& path) : in_(path) {
  if (!in_) throw DataError("cannot open CSV file: " + path);
  if (!std::getline(in_, line_)) throw DataError("empty CSV file: " + path);
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();
  // Strip a UTF-8 byte order mark, some exports carry one.
  if (line_.size() >= 3 && line_[0] == '\xef' && line_[1] == '\xbb' && line_[2] == '\xbf')
    line_.erase(0, 3);
  split_line(line_, header_);
}

bool CsvReader::next(std::vector<std::string>& cells) {
  if (!std::getline(in_, line_)) return false;
  if (!line_.empty() && line_.back() == '\r') line_.pop_back();
  ++row_index_;
  split_line(line_, cells);
  return true;
}

void CsvReader::split_line(const std::string& line, std::vector<std::string>& cells) {
  cells.clear();
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
}

} // namespace edgeids
