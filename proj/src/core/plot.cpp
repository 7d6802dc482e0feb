#include "core/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "core/common.hpp"

namespace driftbench {

using nlohmann::json;

namespace {

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr double kLeft = 64, kRight = 490, kTop = 40, kBottom = 370;

struct Series {
  std::string learner;
  std::vector<std::optional<double>> online;
  std::vector<std::optional<double>> ff;
};

std::vector<std::optional<double>> opt_array(const json& arr) {
  std::vector<std::optional<double>> out;
  for (const json& v : arr)
    out.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
  return out;
}

std::vector<Series> extract(const std::vector<json>& summaries) {
  if (summaries.empty()) fail(errc::invalid_argument, "plot: no summaries given");
  std::vector<Series> series;
  for (const json& s : summaries) {
    if (!s.contains("aggregate") || !s.contains("learner"))
      fail(errc::parse, "plot: summary is missing learner/aggregate");
    Series row;
    row.learner = s["learner"].get<std::string>();
    row.online = opt_array(s["aggregate"]["online_per_env_mean"]);
    row.ff = opt_array(s["aggregate"]["ff_per_env_mean"]);
    series.push_back(std::move(row));
  }
  const std::size_t n = series.front().online.size();
  std::ostringstream offenders;
  for (const Series& row : series)
    if (row.online.size() != n)
      offenders << " " << row.learner << "=" << row.online.size();
  if (!offenders.str().empty())
    fail(errc::invalid_argument, "plot: incompatible environment counts: expected " +
                                     std::to_string(n) + ", got" + offenders.str());
  return series;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

double map_x(double v, double lo, double hi) {
  return kLeft + (v - lo) / (hi - lo) * (kRight - kLeft);
}
double map_y(double v, double lo, double hi) {
  return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop);
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

void draw_axes(std::ostringstream& out, double xlo, double xhi, double ylo, double yhi,
               const std::string& xlabel, const std::string& ylabel, int xticks) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= xticks; ++i) {
    double v = xlo + (xhi - xlo) * i / xticks;
    double x = map_x(v, xlo, xhi);
    out << "<line x1=\"" << x << "\" y1=\"" << kBottom << "\" x2=\"" << x << "\" y2=\""
        << kBottom + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << x << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    double v = ylo + (yhi - ylo) * i / 5;
    double y = map_y(v, ylo, yhi);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\""
        << y << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
      << "</text>\n"
      << "<text x=\"16\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (kTop + kBottom) / 2 << ")\">" << ylabel
      << "</text>\n";
}

void draw_legend(std::ostringstream& out, const std::vector<Series>& series) {
  double y = kTop + 10;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % 8];
    out << "<rect x=\"" << kRight + 12 << "\" y=\"" << y - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << kRight + 30 << "\" y=\"" << y + 2
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].learner
        << "</text>\n";
    y += 20;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot open for writing: " + path);
  out << content;
  if (!out) fail(errc::io, "write failed: " + path);
}

void curve_chart(const std::vector<Series>& series, bool use_ff, const std::string& title,
                 const std::string& ylabel, const std::string& out_base) {
  const std::size_t n = series.front().online.size();
  double ylo = 0.0, yhi = 1.0;
  if (use_ff) {
    ylo = 0.0;
    yhi = 0.0;
    for (const Series& row : series)
      for (const auto& v : row.ff)
        if (v) {
          ylo = std::min(ylo, *v);
          yhi = std::max(yhi, *v);
        }
    const double pad = std::max(0.05, (yhi - ylo) * 0.1);
    ylo -= pad;
    yhi += pad;
  }

  const double xmax = n > 1 ? static_cast<double>(n) : 2.0;
  std::ostringstream svg;
  open_svg(svg, title);
  draw_axes(svg, 1.0, xmax, ylo, yhi, "environment", ylabel,
            std::max(1, static_cast<int>(n) - 1));
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& values = use_ff ? series[s].ff : series[s].online;
    std::ostringstream points;
    for (std::size_t i = 0; i < n; ++i) {
      if (!values[i]) continue;
      points << map_x(static_cast<double>(i + 1), 1.0, xmax) << ","
             << map_y(*values[i], ylo, yhi) << " ";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << kColors[s % 8]
        << "\" stroke-width=\"2\" points=\"" << points.str() << "\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
      if (!values[i]) continue;
      svg << "<circle cx=\"" << map_x(static_cast<double>(i + 1), 1.0, xmax)
          << "\" cy=\"" << map_y(*values[i], ylo, yhi) << "\" r=\"3\" fill=\""
          << kColors[s % 8] << "\"/>\n";
    }
  }
  draw_legend(svg, series);
  svg << "</svg>\n";
  write_file(out_base + ".svg", svg.str());

  std::ostringstream csv;
  csv << "environment";
  for (const Series& row : series) csv << "," << row.learner;
  csv << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv << (i + 1);
    for (const Series& row : series) {
      const auto& v = use_ff ? row.ff[i] : row.online[i];
      csv << ",";
      if (v) csv << format_double(*v);
    }
    csv << "\n";
  }
  write_file(out_base + ".csv", csv.str());
}

void scatter_chart(const std::vector<Series>& series, const std::string& out_base) {
  const std::size_t last = series.front().online.size() - 1;
  double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 1.0;
  for (const Series& row : series)
    if (row.ff[last]) {
      xlo = std::min(xlo, *row.ff[last]);
      xhi = std::max(xhi, *row.ff[last]);
    }
  const double pad = std::max(0.05, (xhi - xlo) * 0.1);
  xlo -= pad;
  xhi += pad;

  std::ostringstream svg;
  open_svg(svg, "Final environment: online accuracy vs forgetting");
  draw_axes(svg, xlo, xhi, ylo, yhi, "final-environment forgetting",
            "final-environment online accuracy", 5);
  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& fx = series[s].ff[last];
    const auto& fy = series[s].online[last];
    if (!fx || !fy) continue;
    const double x = map_x(*fx, xlo, xhi);
    const double y = map_y(*fy, ylo, yhi);
    svg << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"5\" fill=\"" << kColors[s % 8]
        << "\"/>\n"
        << "<text x=\"" << x + 8 << "\" y=\"" << y - 6
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].learner
        << "</text>\n";
  }
  draw_legend(svg, series);
  svg << "</svg>\n";
  write_file(out_base + ".svg", svg.str());

  std::ostringstream csv;
  csv << "learner,forgetting,online_accuracy\n";
  for (const Series& row : series) {
    csv << row.learner << ",";
    if (row.ff[last]) csv << format_double(*row.ff[last]);
    csv << ",";
    if (row.online[last]) csv << format_double(*row.online[last]);
    csv << "\n";
  }
  write_file(out_base + ".csv", csv.str());
}

}  // namespace

void write_plots(const std::vector<json>& summaries, const std::string& out_dir) {
  const std::vector<Series> series = extract(summaries);
  std::filesystem::create_directories(out_dir);
  curve_chart(series, false, "Online accuracy per environment", "online accuracy",
              out_dir + "/online_accuracy_per_env");
  curve_chart(series, true, "Forgetting per environment", "forgetting",
              out_dir + "/forgetting_per_env");
  scatter_chart(series, out_dir + "/final_env_scatter");
}

}  // namespace driftbench
