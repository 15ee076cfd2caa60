#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace manip::harness {

// Plain comma-separated table. Cells never contain commas or quotes; numbers
// are written in shortest round-trip form so output is byte-stable.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  int column_index(const std::string& name) const;  // throws when missing
  std::vector<double> column(const std::string& name) const;
};

std::string cell(double x);
std::string cell(long x);
std::string cell(int x);

void write_csv(std::ostream& out, const Table& t);
void write_csv(const std::string& path, const Table& t);
Table parse_csv(const std::string& text);
Table read_csv(const std::string& path);

}  // namespace manip::harness
