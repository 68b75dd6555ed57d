#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heatlab {

// Deterministic CSV writer: fixed %.17g formatting so identical runs produce
// byte-identical files.
class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) : cols_(std::move(columns)) {}
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  std::string str() const;
  void save(const std::string& path) const;

 private:
  std::vector<std::string> cols_;
  std::vector<std::string> rows_;
};

std::string format_double(double v);

// Self-contained SVG line plot: fixed 800x600 canvas, axes, polyline series.
struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

std::string svg_line_plot(const std::string& title, const std::vector<SvgSeries>& series,
                          bool logx = false, bool logy = false);

uint64_t fnv1a64(const std::string& data);

struct ExperimentOutcome {
  std::string name;
  std::string verdict;  // PASS/FAIL/INFO/...
  std::map<std::string, double> constants;
  bool structural_ok = true;
  bool truncation_flag = false;
  std::string note;
};

struct RunReport {
  std::vector<ExperimentOutcome> outcomes;
  std::vector<std::pair<std::string, uint64_t>> manifest;  // file, digest
  double wall_seconds = 0.0;
  bool structural_pass = true;
  bool asserted_fail = false;

  void emit_file(const std::string& dir, const std::string& name, const std::string& content);
  std::string summary() const;
};

}  // namespace heatlab
