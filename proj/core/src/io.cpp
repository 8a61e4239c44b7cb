#include "sforge/io.hpp"

#include <fstream>
#include <sstream>

#include "sforge/config.hpp"
#include "sforge/errors.hpp"

namespace sforge::io {

ColumnWriter::ColumnWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ' ';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void ColumnWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ' ';
    buffer_ += config::format_double(values[i]);
  }
  buffer_ += '\n';
}

void ColumnWriter::row_mixed(const std::string& first, const std::vector<double>& rest) {
  buffer_ += first;
  for (double v : rest) {
    buffer_ += ' ';
    buffer_ += config::format_double(v);
  }
  buffer_ += '\n';
}

void ColumnWriter::close() {
  if (!open_) return;
  open_ = false;
  write_text_file(path_, buffer_);
}

ColumnWriter::~ColumnWriter() {
  try {
    close();
  } catch (...) {
  }
}

void write_field(const std::string& path, const verifier::FieldGrid& grid) {
  ColumnWriter w(path, {"t", "x", "re", "im", "abs2"});
  const std::size_t nx = grid.x.size();
  for (std::size_t j = 0; j < grid.t.size(); ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const auto v = grid.values[j * nx + i];
      w.row({grid.t[j], grid.x[i], v.real(), v.imag(), std::norm(v)});
    }
  }
  w.close();
}

std::pair<std::vector<double>, std::vector<double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  std::vector<double> t, v;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) {
      t.push_back(a);
      v.push_back(b);
    }
  }
  if (t.empty()) throw ConfigError("table file has no data rows: " + path);
  return {std::move(t), std::move(v)};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

}  // namespace sforge::io
