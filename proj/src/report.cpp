#include "heatlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace heatlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Csv::row(const std::vector<double>& values) {
  std::string r;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) r += ",";
    r += format_double(values[i]);
  }
  rows_.push_back(std::move(r));
}

void Csv::row_mixed(const std::vector<std::string>& values) {
  std::string r;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) r += ",";
    r += values[i];
  }
  rows_.push_back(std::move(r));
}

std::string Csv::str() const {
  std::string out;
  for (size_t i = 0; i < cols_.size(); ++i) {
    if (i) out += ",";
    out += cols_[i];
  }
  out += "\n";
  for (auto& r : rows_) {
    out += r;
    out += "\n";
  }
  return out;
}

void Csv::save(const std::string& path) const {
  std::ofstream f(path);
  f << str();
}

namespace {

double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

std::string svg_line_plot(const std::string& title, const std::vector<SvgSeries>& series,
                          bool logx, bool logy) {
  const int W = 800, H = 600, ML = 70, MR = 20, MT = 40, MB = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return logx ? safe_log10(v) : v; };
  auto ty = [&](double v) { return logy ? safe_log10(v) : v; };
  for (auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (xmin > xmax) {
    xmin = 0;
    xmax = 1;
  }
  if (ymin > ymax) {
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1;
  if (ymax - ymin < 1e-12) ymax = ymin + 1;
  auto px = [&](double v) { return ML + (tx(v) - xmin) / (xmax - xmin) * (W - ML - MR); };
  auto py = [&](double v) { return H - MB - (ty(v) - ymin) / (ymax - ymin) * (H - MT - MB); };
  static const char* colors[] = {"#1f6fb2", "#b23c1f", "#2e8b57", "#8b2e87", "#767676"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  svg << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
      << H - MB << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double fx = xmin + (xmax - xmin) * t / 4.0;
    double fy = ymin + (ymax - ymin) * t / 4.0;
    double sx = ML + (W - ML - MR) * t / 4.0;
    double sy = H - MB - (H - MT - MB) * t / 4.0;
    svg << "<text x=\"" << sx << "\" y=\"" << H - MB + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">"
        << format_double(logx ? std::pow(10, fx) : fx) << "</text>\n";
    svg << "<text x=\"" << ML - 6 << "\" y=\"" << sy + 4
        << "\" text-anchor=\"end\" font-size=\"11\">"
        << format_double(logy ? std::pow(10, fy) : fy) << "</text>\n";
  }
  int ci = 0;
  for (auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5] << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i)
      svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 16 * (ci + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">"
        << s.label << "</text>\n";
    ++ci;
  }
  svg << "</svg>\n";
  return svg.str();
}

uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void RunReport::emit_file(const std::string& dir, const std::string& name,
                          const std::string& content) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  manifest.emplace_back(name, fnv1a64(content));
}

std::string RunReport::summary() const {
  std::ostringstream out;
  out << "experiments: " << outcomes.size() << "\n";
  for (auto& o : outcomes) {
    out << o.name << ": " << o.verdict;
    if (o.truncation_flag) out << " [truncated]";
    for (auto& [k, v] : o.constants) out << " " << k << "=" << format_double(v);
    if (!o.note.empty()) out << " # " << o.note;
    out << "\n";
  }
  out << "manifest:\n";
  char buf[32];
  for (auto& [f, d] : manifest) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
    out << "  " << f << " fnv1a64=" << buf << "\n";
  }
  out << "wall_seconds: " << format_double(wall_seconds) << "\n";
  out << "structural: " << (structural_pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace heatlab
