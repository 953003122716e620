#pragma once

#include <fstream>
#include <initializer_list>
#include <string>

namespace csfrot {

/// Fixed 17-significant-digit formatting ("%.17g", C locale): values
/// round-trip to double exactly and output is byte-stable across runs.
std::string fmt17(double x);

/// Line-oriented CSV writer with '\n' endings and explicit flush points.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header);

  void row(std::initializer_list<double> values);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace csfrot
