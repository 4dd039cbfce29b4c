#include "exactwkb/records.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exactwkb/common.hpp"

namespace exactwkb {

namespace {

std::string format(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

double parse(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double x = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || end != s.data() + s.size())
    throw Error(ErrorKind::InvalidArgument, "read_records",
                "bad number '" + s + "' on line " + std::to_string(line));
  return x;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

void RecordTable::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw Error(ErrorKind::InvalidArgument, "RecordTable::add", "row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t RecordTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw Error(ErrorKind::InvalidArgument, "RecordTable::column", "no column '" + name + "'");
}

void write_records(std::ostream& os, const RecordTable& table) {
  for (const auto& n : table.notes) os << "# " << n << '\n';
  os << "# ";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format(row[i]);
    os << '\n';
  }
}

void write_records(const std::string& path, const RecordTable& table) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "write_records", "cannot open " + path);
  write_records(os, table);
}

RecordTable read_records(std::istream& is) {
  RecordTable t;
  std::vector<std::string> comments;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      comments.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    if (t.columns.empty()) {
      if (comments.empty()) throw Error(ErrorKind::InvalidArgument, "read_records", "missing header line");
      t.columns = split(comments.back());
      comments.pop_back();
      t.notes = comments;
    }
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(parse(cell, n));
    if (row.size() != t.columns.size())
      throw Error(ErrorKind::InvalidArgument, "read_records", "ragged row on line " + std::to_string(n));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty() && !comments.empty()) {  // header only, no rows
    t.columns = split(comments.back());
    comments.pop_back();
    t.notes = comments;
  }
  return t;
}

RecordTable read_records(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::InvalidArgument, "read_records", "cannot open " + path);
  return read_records(is);
}

}  // namespace exactwkb
