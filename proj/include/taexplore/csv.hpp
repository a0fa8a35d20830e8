#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace taexplore {

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

// Comma-separated, period decimal point, '\n' line endings, header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Throws SchemaError naming the column when it is absent.
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  void write(const std::filesystem::path& path) const;
  std::string to_string() const;
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(const std::string& text);
};

}  // namespace taexplore
