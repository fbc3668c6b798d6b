#include "dvlae/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dvlae/error.hpp"

namespace dvlae {
namespace {

// Tableau 10, minus red which is reserved for highlights.
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr const char* kHighlight = "#d62728";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

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

}  // namespace

std::string render_scatter_svg(const Embedding& embedding, const PlotSpec& spec) {
  std::set<std::string> ids;
  for (const auto& p : embedding.points) ids.insert(p.id);
  for (const auto& h : spec.highlight) {
    if (!ids.count(h)) throw Error("highlight id '" + h + "' is not in the embedding");
  }
  const std::set<std::string> highlighted(spec.highlight.begin(), spec.highlight.end());

  std::map<std::string, std::size_t> colour_of;
  if (spec.color_by_tag) {
    for (const auto& p : embedding.points) colour_of.emplace(p.tag, 0);
    std::size_t k = 0;
    for (auto& [tag, idx] : colour_of) idx = k++ % std::size(kPalette);
  } else {
    colour_of.emplace("", 0);
  }
  const auto label = [](const std::string& tag) { return tag.empty() ? std::string("(untagged)") : tag; };

  const double legend_width = 160.0;
  const double margin = 20.0;
  const double plot_w = std::max(1.0, spec.width - legend_width - 2 * margin);
  const double plot_h = std::max(1.0, spec.height - 2 * margin);

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!embedding.points.empty()) {
    xmin = xmax = embedding.points.front().x;
    ymin = ymax = embedding.points.front().y;
    for (const auto& p : embedding.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  }
  const double xspan = xmax > xmin ? xmax - xmin : 1.0;
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;
  const auto px = [&](double x) { return margin + (x - xmin) / xspan * plot_w; };
  const auto py = [&](double y) { return margin + plot_h - (y - ymin) / yspan * plot_h; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  svg += "<g class=\"points\">\n";
  for (const auto& p : embedding.points) {
    if (highlighted.count(p.id)) continue;
    const char* colour = kPalette[colour_of[spec.color_by_tag ? p.tag : ""]];
    svg += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) + "\" r=\"3\" fill=\"" +
           colour + "\" fill-opacity=\"0.7\"><title>" + escape(p.id) + "</title></circle>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"highlights\">\n";
  for (const auto& p : embedding.points) {
    if (!highlighted.count(p.id)) continue;
    const double cx = px(p.x), cy = py(p.y), r = 6.0;
    svg += "<polygon class=\"diamond\" points=\"" + num(cx) + "," + num(cy - r) + " " +
           num(cx + r) + "," + num(cy) + " " + num(cx) + "," + num(cy + r) + " " + num(cx - r) +
           "," + num(cy) + "\" fill=\"" + kHighlight + "\" stroke=\"#000000\" stroke-width=\"0.5\"><title>" +
           escape(p.id) + "</title></polygon>\n";
  }
  svg += "</g>\n";

  svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = margin + 10.0;
  const double lx = spec.width - legend_width + 10.0;
  if (spec.color_by_tag) {
    for (const auto& [tag, idx] : colour_of) {
      svg += "<g class=\"legend-entry\"><circle cx=\"" + num(lx) + "\" cy=\"" + num(ly) +
             "\" r=\"5\" fill=\"" + kPalette[idx] + "\"/><text x=\"" + num(lx + 12) + "\" y=\"" +
             num(ly + 4) + "\">" + escape(label(tag)) + "</text></g>\n";
      ly += 18.0;
    }
  }
  if (!highlighted.empty()) {
    svg += "<g class=\"legend-highlight\"><polygon points=\"" + num(lx) + "," + num(ly - 6) + " " +
           num(lx + 6) + "," + num(ly) + " " + num(lx) + "," + num(ly + 6) + " " + num(lx - 6) +
           "," + num(ly) + "\" fill=\"" + kHighlight + "\"/><text x=\"" + num(lx + 12) + "\" y=\"" +
           num(ly + 4) + "\">highlighted (" + std::to_string(highlighted.size()) + ")</text></g>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace dvlae
