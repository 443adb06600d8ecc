#pragma once
// File outputs: RFC-4180 CSV with round-trip floats, JSON documents and
// minimal SVG plots. Every file carries the tool version and config hash.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oqs/statistics.hpp"

namespace oqs {

struct Stamp {
  std::string version;
  std::string hash;
};

/// 17 significant digits, "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);
/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

/// Writes a leading "# oqs <version> config <hash>" line, then the header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Stamp& stamp, const std::vector<std::string>& header);

  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long long x);
  CsvWriter& operator<<(const std::string& s);
  void end_row();

 private:
  std::ofstream out_;
  bool first_ = true;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool lines = true;
};

struct PlotAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

void write_svg_plot(const std::filesystem::path& path, const Stamp& stamp, const PlotAxes& axes,
                    const std::vector<PlotSeries>& series);
/// Normalized histogram as bars, with optional overlay curves.
void write_svg_histogram(const std::filesystem::path& path, const Stamp& stamp, const PlotAxes& axes,
                         const Histogram& h, const std::vector<PlotSeries>& overlays = {});

}  // namespace oqs
