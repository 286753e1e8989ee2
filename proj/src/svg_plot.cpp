#include "textlab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "textlab/error.hpp"

namespace textlab {

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string num_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct AxisRange {
  double lo, hi;
};

AxisRange padded_range(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  double span = hi - lo;
  if (span <= 0.0) span = lo == 0.0 ? 1.0 : std::abs(lo);
  return {lo - 0.05 * span, hi + 0.05 * span};
}

struct Frame {
  double x0, y0, w, h;      // plot area in px
  AxisRange xr, yr;

  double sx(double x) const { return x0 + (x - xr.lo) / (xr.hi - xr.lo) * w; }
  double sy(double y) const {
    return y0 + h - (y - yr.lo) / (yr.hi - yr.lo) * h;
  }
};

void emit_header(std::string& out, double width, double height) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                width, height, width, height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void emit_title(std::string& out, double width, const std::string& title) {
  out += "<text x=\"" + px(width / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" +
         xml_escape(title) + "</text>\n";
}

void emit_axes(std::string& out, const Frame& f) {
  out += "<rect x=\"" + px(f.x0) + "\" y=\"" + px(f.y0) + "\" width=\"" +
         px(f.w) + "\" height=\"" + px(f.h) +
         "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    double fx = f.xr.lo + (f.xr.hi - f.xr.lo) * t / 4.0;
    double fy = f.yr.lo + (f.yr.hi - f.yr.lo) * t / 4.0;
    out += "<text x=\"" + px(f.sx(fx)) + "\" y=\"" + px(f.y0 + f.h + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#444444\">" +
           num_label(fx) + "</text>\n";
    out += "<text x=\"" + px(f.x0 - 6) + "\" y=\"" + px(f.sy(fy) + 3) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#444444\">" +
           num_label(fy) + "</text>\n";
  }
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string render_scatter(const std::vector<std::array<double, 2>>& coords,
                           const std::vector<std::string>& color_key,
                           const std::string& title) {
  if (coords.empty()) throw_data("render_scatter: empty embedding");
  if (coords.size() != color_key.size())
    throw_data("render_scatter: coords/labels size mismatch");
  for (const auto& c : coords)
    if (!std::isfinite(c[0]) || !std::isfinite(c[1]))
      throw_data("render_scatter: non-finite coordinate");

  // legend labels in first-appearance order
  std::vector<std::string> labels;
  for (const auto& key : color_key)
    if (std::find(labels.begin(), labels.end(), key) == labels.end())
      labels.push_back(key);
  auto color_of = [&](const std::string& key) {
    size_t i = std::find(labels.begin(), labels.end(), key) - labels.begin();
    return kPalette[i % kPaletteSize];
  };

  double xlo = coords[0][0], xhi = coords[0][0];
  double ylo = coords[0][1], yhi = coords[0][1];
  for (const auto& c : coords) {
    xlo = std::min(xlo, c[0]);
    xhi = std::max(xhi, c[0]);
    ylo = std::min(ylo, c[1]);
    yhi = std::max(yhi, c[1]);
  }

  const double width = 900, height = 640;
  Frame f{70, 40, width - 250, height - 100, padded_range(xlo, xhi),
          padded_range(ylo, yhi)};

  std::string out;
  emit_header(out, width, height);
  emit_title(out, width - 180, title);
  emit_axes(out, f);

  for (size_t i = 0; i < coords.size(); ++i) {
    out += "<circle cx=\"" + px(f.sx(coords[i][0])) + "\" cy=\"" +
           px(f.sy(coords[i][1])) +
           "\" r=\"3\" fill=\"" + color_of(color_key[i]) +
           "\" fill-opacity=\"0.7\"/>\n";
  }

  // legend block
  double lx = f.x0 + f.w + 24, ly = f.y0 + 10;
  out += "<text x=\"" + px(lx) + "\" y=\"" + px(ly - 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" "
         "font-weight=\"bold\">legend</text>\n";
  for (size_t i = 0; i < labels.size(); ++i) {
    double y = ly + 16 + 18 * static_cast<double>(i);
    out += "<circle cx=\"" + px(lx + 6) + "\" cy=\"" + px(y - 4) +
           "\" r=\"5\" fill=\"" + std::string(kPalette[i % kPaletteSize]) +
           "\"/>\n";
    out += "<text x=\"" + px(lx + 18) + "\" y=\"" + px(y) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           xml_escape(labels[i]) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_topic_bars(
    const std::vector<std::vector<std::pair<std::string, double>>>& topics,
    const std::string& title) {
  if (topics.empty()) throw_data("render_topic_bars: no topics");

  const double panel_w = 420;
  const double bar_h = 13, bar_gap = 4;
  const double label_w = 110, value_gap = 6;
  const size_t cols = topics.size() >= 4 ? 4 : topics.size();
  const size_t rows = (topics.size() + cols - 1) / cols;
  size_t max_terms = 0;
  for (const auto& t : topics) max_terms = std::max(max_terms, t.size());
  const double panel_h =
      34 + static_cast<double>(max_terms) * (bar_h + bar_gap) + 12;
  const double width = 40 + panel_w * static_cast<double>(cols);
  const double height = 46 + panel_h * static_cast<double>(rows);

  std::string out;
  emit_header(out, width, height);
  emit_title(out, width, title);

  for (size_t t = 0; t < topics.size(); ++t) {
    const double ox = 20 + panel_w * static_cast<double>(t % cols);
    const double oy = 40 + panel_h * static_cast<double>(t / cols);
    out += "<text x=\"" + px(ox + 4) + "\" y=\"" + px(oy + 14) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "font-weight=\"bold\">Topic " +
           std::to_string(t) + "</text>\n";
    double max_p = 0.0;
    for (const auto& [_, p] : topics[t]) max_p = std::max(max_p, p);
    if (max_p <= 0.0) max_p = 1.0;
    const double bar_max = panel_w - label_w - 70;
    for (size_t r = 0; r < topics[t].size(); ++r) {
      const auto& [term, prob] = topics[t][r];
      const double y = oy + 24 + static_cast<double>(r) * (bar_h + bar_gap);
      const double w = prob / max_p * bar_max;
      out += "<text x=\"" + px(ox + label_w - 4) + "\" y=\"" +
             px(y + bar_h - 3) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"10\">" +
             xml_escape(term) + "</text>\n";
      out += "<rect x=\"" + px(ox + label_w) + "\" y=\"" + px(y) +
             "\" width=\"" + px(w) + "\" height=\"" + px(bar_h) +
             "\" fill=\"" + kPalette[t % kPaletteSize] + "\"/>\n";
      out += "<text x=\"" + px(ox + label_w + w + value_gap) + "\" y=\"" +
             px(y + bar_h - 3) +
             "\" font-family=\"sans-serif\" font-size=\"9\" "
             "fill=\"#555555\">" +
             num_label(prob) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_curves(
    const std::vector<std::pair<std::string, RunHistory>>& series,
    const std::string& title) {
  if (series.empty()) throw_data("render_curves: no histories");
  for (const auto& [name, h] : series)
    if (h.epochs() == 0) throw_data("render_curves: empty history " + name);

  const double width = 1060, height = 480;
  size_t max_epochs = 0;
  for (const auto& [_, h] : series) max_epochs = std::max(max_epochs, h.epochs());

  double loss_hi = 0.0;
  for (const auto& [_, h] : series) {
    for (double v : h.train_loss) loss_hi = std::max(loss_hi, v);
    for (double v : h.val_loss) loss_hi = std::max(loss_hi, v);
  }
  if (loss_hi <= 0.0) loss_hi = 1.0;

  Frame acc{60, 50, 380, 320, padded_range(1, double(max_epochs)),
            padded_range(0.0, 1.0)};
  Frame loss{540, 50, 380, 320, padded_range(1, double(max_epochs)),
             padded_range(0.0, loss_hi)};

  std::string out;
  emit_header(out, width, height);
  emit_title(out, width, title);
  out += "<text x=\"" + px(acc.x0 + acc.w / 2) + "\" y=\"40\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">accuracy</text>\n";
  out += "<text x=\"" + px(loss.x0 + loss.w / 2) + "\" y=\"40\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">loss</text>\n";
  emit_axes(out, acc);
  emit_axes(out, loss);

  auto polyline = [&](const Frame& f, const std::vector<double>& ys,
                      const char* color, bool dashed) {
    std::string pts;
    for (size_t e = 0; e < ys.size(); ++e) {
      if (e) pts.push_back(' ');
      pts += px(f.sx(double(e + 1))) + "," + px(f.sy(ys[e]));
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\"" +
           (dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + pts +
           "\"/>\n";
  };

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    const RunHistory& h = series[s].second;
    out += polyline(acc, h.train_acc, color, false);
    out += polyline(acc, h.val_acc, color, true);
    out += polyline(loss, h.train_loss, color, false);
    out += polyline(loss, h.val_loss, color, true);
  }

  double ly = 396;
  for (size_t s = 0; s < series.size(); ++s) {
    double lx = 60 + 240 * static_cast<double>(s % 4);
    double y = ly + 20 * static_cast<double>(s / 4);
    out += "<line x1=\"" + px(lx) + "\" y1=\"" + px(y - 4) + "\" x2=\"" +
           px(lx + 22) + "\" y2=\"" + px(y - 4) + "\" stroke=\"" +
           kPalette[s % kPaletteSize] + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + px(lx + 28) + "\" y=\"" + px(y) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" +
           xml_escape(series[s].first) +
           " (solid train / dashed val)</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace textlab
