#pragma once

#include <string>
#include <vector>

#include "sforge/verifier.hpp"

namespace sforge::io {

// Columnar text writer: space-separated columns, one header line, LF line
// endings, 17 significant digits. Deterministic for identical inputs.
class ColumnWriter {
public:
  ColumnWriter(std::string path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row_mixed(const std::string& first, const std::vector<double>& rest);
  void close();
  ~ColumnWriter();

private:
  std::string path_;
  std::string buffer_;
  bool open_ = true;
};

// field.csv: header `t x re im abs2`, rows sorted by (t, x).
void write_field(const std::string& path, const verifier::FieldGrid& grid);

// Two-column (t, value) table, as consumed by tabulated coefficients.
std::pair<std::vector<double>, std::vector<double>> read_table(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sforge::io
