#include "manip/harness/csv.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "manip/sim/env_io.hpp"

namespace manip::harness {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::invalid_argument("Table::add_row: row width differs from header");
  rows.push_back(std::move(row));
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  throw std::out_of_range("CSV column '" + name + "' not found");
}

std::vector<double> Table::column(const std::string& name) const {
  const auto c = static_cast<std::size_t>(column_index(name));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c].empty() ? std::numeric_limits<double>::quiet_NaN()
                                                         : sim::parse_double(r[c], name));
  return out;
}

std::string cell(double x) { return std::isnan(x) ? std::string() : sim::format_double(x); }
std::string cell(long x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }

void write_csv(std::ostream& out, const Table& t) {
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].find_first_of(",\n\"") != std::string::npos) {
        throw std::invalid_argument("write_csv: cell contains a separator: " + v[i]);
      }
      out << (i ? "," : "") << v[i];
    }
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_csv(out, t);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t p = 0;
    while (true) {
      const std::size_t q = line.find(',', p);
      cells.push_back(line.substr(p, q == std::string::npos ? std::string::npos : q - p));
      if (q == std::string::npos) break;
      p = q + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else if (!(cells.size() == 1 && cells[0].empty())) {
      t.add_row(std::move(cells));
    }
  }
  return t;
}

Table read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace manip::harness
