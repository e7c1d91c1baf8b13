#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mfhmc {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key/value pairs echoed into output headers.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal form that round-trips, '.' decimal point regardless of locale.
std::string format_double(double value);

/// `#`-prefixed provenance lines: tool version, command, seed and every config entry.
void write_reproducibility_header(std::ostream& out, const std::string& command, const ConfigEntries& config);

/// Writes one CSV row; doubles go through format_double.
class CsvRow {
 public:
  CsvRow& operator<<(double v);
  CsvRow& operator<<(std::size_t v);
  CsvRow& operator<<(int v);
  CsvRow& operator<<(const std::string& v);
  std::string str() const { return line_; }

 private:
  void sep();
  std::string line_;
};

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  bool dashed = false;
};

/// Static line plot with a logarithmic y axis.
void write_svg_log_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace mfhmc
