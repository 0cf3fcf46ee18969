#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bsr::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::vector<double>> lower;  // shaded band, e.g. a 95% CI
  std::optional<std::vector<double>> upper;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 720;
  int height = 420;
};

/// Standalone SVG document with axes, ticks, legend and optional bands.
/// Non-finite points are skipped.
std::string render(const Plot& plot);
void save(const std::string& path, const Plot& plot);

}  // namespace bsr::svg
