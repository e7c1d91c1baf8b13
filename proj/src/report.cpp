#include "mfhmc/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace mfhmc {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_reproducibility_header(std::ostream& out, const std::string& command, const ConfigEntries& config) {
  out << "# meanfield-hmc " << kVersion << '\n';
  out << "# command: " << command << '\n';
  for (const auto& [key, value] : config) out << "# " << key << ": " << value << '\n';
}

void CsvRow::sep() {
  if (!line_.empty()) line_ += ',';
}

CsvRow& CsvRow::operator<<(double v) {
  sep();
  line_ += format_double(v);
  return *this;
}

CsvRow& CsvRow::operator<<(std::size_t v) {
  sep();
  line_ += std::to_string(v);
  return *this;
}

CsvRow& CsvRow::operator<<(int v) {
  sep();
  line_ += std::to_string(v);
  return *this;
}

CsvRow& CsvRow::operator<<(const std::string& v) {
  sep();
  line_ += v;
  return *this;
}

void write_svg_log_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr double width = 640, height = 420, left = 80, right = 30, top = 40, bottom = 60;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!(s.y[k] > 0.0)) continue;
      x_min = std::min(x_min, s.x[k]);
      x_max = std::max(x_max, s.x[k]);
      y_min = std::min(y_min, std::log10(s.y[k]));
      y_max = std::max(y_max, std::log10(s.y[k]));
    }
  }
  if (!std::isfinite(x_min)) x_min = 0, x_max = 1, y_min = -1, y_max = 0;
  if (x_max == x_min) x_max = x_min + 1;
  y_min = std::floor(y_min);
  y_max = std::ceil(y_max);
  if (y_max == y_min) y_max = y_min + 1;
  const auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * (width - left - right); };
  const auto py = [&](double y) {
    return top + (y_max - std::log10(y)) / (y_max - y_min) * (height - top - bottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << height - bottom
      << "\" stroke=\"black\"/>\n";
  for (double decade = y_min; decade <= y_max; decade += 1.0) {
    const double y = py(std::pow(10.0, decade));
    out << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << width - right << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << decade << "</text>\n";
  }
  for (double x = std::ceil(x_min); x <= x_max; x += 1.0) {
    out << "<text x=\"" << px(x) << "\" y=\"" << height - bottom + 18 << "\" text-anchor=\"middle\">" << x
        << "</text>\n";
  }
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << height / 2
      << ")\">" << y_label << "</text>\n";

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    out << "<polyline fill=\"none\" stroke=\"" << colors[s % 4] << "\" stroke-width=\"2\""
        << (ser.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (std::size_t k = 0; k < ser.x.size(); ++k)
      if (ser.y[k] > 0.0) out << px(ser.x[k]) << ',' << py(ser.y[k]) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 16 * (s + 1) << "\" fill=\"" << colors[s % 4]
        << "\">" << ser.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mfhmc
