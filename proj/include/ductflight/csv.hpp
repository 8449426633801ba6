#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace ductflight {

// Minimal CSV support for the tools and logs in this project: plain comma
// separation, one header row, numeric payloads written with shortest
// round-trip formatting. No quoting or escaping; none of our fields need it.

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace ductflight
