#pragma once

#include <string>
#include <utility>
#include <vector>

namespace amcsp {

inline constexpr const char* kToolVersion = "amcsp 0.1.0";

// CSV with a leading '#' metadata block, plus key=value summary lines.
struct Report {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;

  void add_row(std::vector<std::string> row);
  void add_summary(std::string key, std::string value);
  std::string csv() const;
  std::string summary_text() const;
};

// The CSV with metadata lines removed.
std::string data_section(const std::string& csv);

// Fixed, locale-independent formatting so data sections compare bytewise.
std::string format_double(double v);

std::string wall_clock_utc();

}  // namespace amcsp
