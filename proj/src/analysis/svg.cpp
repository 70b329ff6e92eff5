#include "teletype/analysis/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace teletype::analysis {

namespace {

constexpr double kWidth = 800, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 110;
constexpr std::array kPalette{"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));
}

std::size_t column(const Table& t, const std::string& name) {
  auto it = std::find(t.columns.begin(), t.columns.end(), name);
  if (it == t.columns.end()) throw std::invalid_argument("missing column " + name);
  return static_cast<std::size_t>(it - t.columns.begin());
}

double number(const std::string& cell) { return cell == kNotApplicable ? 0.0 : std::stod(cell); }

std::string bars_from(const Table& t, const std::string& title, const std::string& label_col,
                      const std::string& value_col) {
  std::vector<std::string> labels;
  std::vector<double> values;
  const auto l = column(t, label_col), v = column(t, value_col);
  for (const auto& row : t.rows) {
    labels.push_back(row[l]);
    values.push_back(number(row[v]));
  }
  return bar_chart_svg(title, labels, values);
}

}  // namespace

std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                          const std::vector<double>& values) {
  std::string out = header(title);
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  double hi = 0, lo = 0;
  for (double v : values) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  if (hi == lo) hi = lo + 1;
  auto y_of = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                     kTop + plot_h);
  out += fmt::format("<line x1=\"{0}\" y1=\"{2:.1f}\" x2=\"{1}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", kLeft,
                     kLeft + plot_w, y_of(0));
  for (double tick : {lo, (lo + hi) / 2, hi}) {
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 6,
                       y_of(tick) + 4, tick);
  }
  const double slot = values.empty() ? plot_w : plot_w / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = kLeft + slot * static_cast<double>(i) + slot * 0.1;
    const double y0 = y_of(std::max(values[i], 0.0)), y1 = y_of(std::min(values[i], 0.0));
    out += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"><title>{}: {:g}</title></rect>\n",
        x, y0, slot * 0.8, y1 - y0, kPalette[0], escape(labels[i]), values[i]);
    const double lx = x + slot * 0.4, ly = kTop + plot_h + 12;
    out += fmt::format(
        "<text x=\"{0:.1f}\" y=\"{1:.1f}\" transform=\"rotate(45 {0:.1f} {1:.1f})\">{2}</text>\n", lx, ly,
        escape(labels[i]));
  }
  return out + "</svg>\n";
}

std::string scatter_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                        const std::map<std::string, std::vector<std::pair<double, double>>>& series) {
  std::string out = header(title);
  const double plot_w = kWidth - kLeft - kRight - 100, plot_h = kHeight - kTop - kBottom;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 0;
  for (const auto& [name, points] : series) {
    for (const auto& [x, y] : points) {
      x_hi = std::max(x_hi, x);
      x_lo = std::min(x_lo, x);
      y_hi = std::max(y_hi, y);
      y_lo = std::min(y_lo, y);
    }
  }
  if (y_hi == y_lo) {
    y_hi += 1;
    y_lo -= 1;
  }
  auto px = [&](double x) { return kLeft + plot_w * (x - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) { return kTop + plot_h * (y_hi - y) / (y_hi - y_lo); };
  out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     kLeft, kTop, plot_w, plot_h);
  out += fmt::format("<line x1=\"{}\" y1=\"{:.1f}\" x2=\"{}\" y2=\"{:.1f}\" stroke=\"#999\"/>\n", kLeft, py(0),
                     kLeft + plot_w, py(0));
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kLeft + plot_w / 2,
                     kTop + plot_h + 30, escape(x_label));
  out += fmt::format("<text x=\"16\" y=\"{0}\" transform=\"rotate(-90 16 {0})\" text-anchor=\"middle\">{1}</text>\n",
                     kTop + plot_h / 2, escape(y_label));
  out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 4, py(y_hi) + 4,
                     y_hi);
  out += fmt::format("<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", kLeft - 4, py(y_lo) + 4,
                     y_lo);
  std::size_t color = 0;
  for (const auto& [name, points] : series) {
    const char* fill = kPalette[color % kPalette.size()];
    for (const auto& [x, y] : points) {
      out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"2.5\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
                         px(x), py(y), fill);
    }
    const double ly = kTop + 14.0 * static_cast<double>(color);
    out += fmt::format("<circle cx=\"{}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\"/>\n", kLeft + plot_w + 14, ly, fill);
    out += fmt::format("<text x=\"{}\" y=\"{:.1f}\">{}</text>\n", kLeft + plot_w + 22, ly + 4, escape(name));
    ++color;
  }
  return out + "</svg>\n";
}

std::string plot_metric(const std::string& metric, const std::vector<Table>& tables) {
  if (tables.empty()) throw std::invalid_argument("nothing to plot");
  const Table& t = tables.front();
  if (metric == "records_per_hour") return bars_from(t, "Records per hour", "hour", "records");
  if (metric == "mode_distribution") return bars_from(t, "Records by mode", "mode", "records");
  if (metric == "errors_by_mode") return bars_from(t, "Type errors by mode", "mode", "type_errors");
  if (metric == "error_popularity") return bars_from(t, "Error popularity", "kind", "count");
  if (metric == "edit_delta_by_kind") {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& row : t.rows) {
      double sum = 0;
      for (std::size_t c = 1; c < row.size(); ++c) sum += number(row[c]);
      labels.push_back(row[0]);
      values.push_back(sum);
    }
    return bar_chart_svg("Edit-range changes by kind", labels, values);
  }
  if (metric == "module_delta_breakdown") {
    std::vector<std::string> labels;
    std::vector<double> values;
    const auto up = column(t, "up_pct");
    for (const auto& row : t.rows) {
      labels.push_back(row[0] + " " + row[1]);
      values.push_back(number(row[up]));
    }
    return bar_chart_svg("Share of edits that add errors (%)", labels, values);
  }
  if (metric == "density_deltas") {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    const auto x = column(t, "t_rel_s"), y = column(t, "delta_density"), m = column(t, "mode");
    for (const auto& row : t.rows) series[row[m]].emplace_back(number(row[x]), number(row[y]));
    return scatter_svg("Change in error density", "seconds since session start", "delta density",
                       series);
  }
  throw std::invalid_argument("no plot for " + metric);
}

}  // namespace teletype::analysis
