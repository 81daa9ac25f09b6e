#pragma once

// Minimal SVG line/scatter plots. CSV stays the data output; these are for eyeballing.

#include <string>
#include <vector>

namespace qpc::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool points = false;  // scatter instead of polyline
};

struct Plot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
  std::vector<double> circles;  // radii centred at the origin (zero maps)
  bool equal_aspect = false;

  std::string render(int width = 720, int height = 480) const;
  void write(const std::string& path) const;
};

}  // namespace qpc::svg
