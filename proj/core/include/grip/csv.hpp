#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace grip {

/// Minimal CSV writer for the run outputs. Doubles are written with 17
/// significant digits so files are reproducible byte for byte and parse
/// back to the same values. Rows are flushed as they are written.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(const std::string& value);
  CsvWriter& field(double value);
  CsvWriter& field(int value);
  CsvWriter& field(long value);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  std::size_t written_ = 0;
};

std::string format_double(double value);

/// Parses a numeric CSV produced by CsvWriter. Returns the header and rows
/// as strings; throws ParseError on ragged rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace grip
