#include "ductflight/csv.hpp"

#include <stdexcept>

#include "ductflight/ioutil.hpp"

namespace ductflight {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::invalid_argument("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << fmt_double(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  out_.close();
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
  for (std::string_view cell : split(line, ',')) table.header.emplace_back(trim(cell));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cells = split(line, ',');
    if (cells.size() != table.header.size()) {
      throw std::invalid_argument("csv row width mismatch in " + path);
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::string_view cell : cells) row.push_back(parse_double(trim(cell)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ductflight
