#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qwork {

// 17 significant digits: round-trip exact for IEEE doubles, so rewriting a
// file from re-parsed values is byte identical.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // numeric columns only

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> col(const std::string& name) const;  // throws when absent
};

// Writes `header` then one row per entry; every cell through format_double.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& trailing_text_column = {});

CsvTable read_csv(const std::filesystem::path& path);

// FNV-1a 64-bit over the raw file bytes; manifest content hashes.
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t value);

}  // namespace qwork
