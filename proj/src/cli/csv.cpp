#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "shiftkl/cli.hpp"

namespace shiftkl::cli {

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, v, 16);
  std::string s(buf.data(), ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 40> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double v) { return add(format_number(v)); }

CsvTable& CsvTable::add(long v) { return add(std::to_string(v)); }

CsvTable& CsvTable::add(const std::string& v) {
  if (rows_.empty()) rows_.emplace_back();
  const bool quote = v.find_first_of(",\"\n") != std::string::npos;
  if (!quote) {
    rows_.back().push_back(v);
  } else {
    std::string q = "\"";
    for (char ch : v) {
      if (ch == '"') q += '"';
      q += ch;
    }
    rows_.back().push_back(q + "\"");
  }
  return *this;
}

void CsvTable::write(std::ostream& os, const std::string& config_hash) const {
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  os << "# tool_version=" << kToolVersion << ", config_hash=" << config_hash << '\n';
}

}  // namespace shiftkl::cli
