#include "grip/csv.hpp"

#include <cstdio>

#include "grip/error.hpp"

namespace grip {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), columns_(header.size()) {
  if (!out_) throw ParseError("csv: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
  out_.flush();
}

CsvWriter& CsvWriter::field(const std::string& value) {
  if (written_) out_ << ',';
  out_ << value;
  written_ += 1;
  return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(format_double(value)); }
CsvWriter& CsvWriter::field(int value) { return field(std::to_string(value)); }
CsvWriter& CsvWriter::field(long value) { return field(std::to_string(value)); }

void CsvWriter::end_row() {
  if (written_ != columns_) {
    throw ContractViolation("csv: row has " + std::to_string(written_) +
                            " fields, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  out_.flush();
  written_ = 0;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  auto split = [](const std::string& text) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = text.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(text.substr(start));
        break;
      }
      fields.push_back(text.substr(start, comma - start));
      start = comma + 1;
    }
    return fields;
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size()) {
        throw ParseError("csv: " + path.string() + ":" + std::to_string(line_no) +
                         ": expected " + std::to_string(table.header.size()) +
                         " fields, got " + std::to_string(fields.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw ParseError("csv: " + path.string() + " is empty");
  return table;
}

}  // namespace grip
