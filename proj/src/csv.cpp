#include "csfrot/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace csfrot {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
  out_ << header << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out_ << ',';
    out_ << fmt17(v);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::flush() { out_.flush(); }

}  // namespace csfrot
