#include "amcsp/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "amcsp/error.hpp"

namespace amcsp {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  return out + "\"";
}

std::string one_line(const std::string& s) {
  std::string out = s;
  for (auto& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

void Report::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("report row width differs from the header");
  rows.push_back(std::move(row));
}

void Report::add_summary(std::string key, std::string value) {
  summary.emplace_back(std::move(key), std::move(value));
}

std::string Report::csv() const {
  std::ostringstream out;
  for (const auto& [k, v] : metadata) out << "# " << k << ": " << one_line(v) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
  return out.str();
}

std::string Report::summary_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : summary) out << k << '=' << one_line(v) << '\n';
  return out.str();
}

std::string data_section(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    out += line;
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string wall_clock_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace amcsp
