#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace exactwkb {

// Comma-delimited numeric table. Lines starting with '#' are comments; the last one
// before the data is the column header.
struct RecordTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;  // extra '#' lines written before the header

  void add(std::vector<double> row);
  std::size_t column(const std::string& name) const;
};

void write_records(std::ostream& os, const RecordTable& table);
void write_records(const std::string& path, const RecordTable& table);

RecordTable read_records(std::istream& is);
RecordTable read_records(const std::string& path);

}  // namespace exactwkb
