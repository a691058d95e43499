#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vaq/polygon.hpp"
#include "vaq/query.hpp"

namespace vaq {

struct SvgPanelCounts {
  std::size_t black = 0;  // result points
  std::size_t green = 0;  // candidates that are not results
  std::size_t gray = 0;   // everything else in view
};

struct SvgCounts {
  SvgPanelCounts traditional;
  SvgPanelCounts voronoi;
};

namespace detail {

inline SvgPanelCounts draw_panel(std::string& svg, const Dataset& data, const Polygon& area,
                                 const QueryOutcome& outcome, const Rect& view, double offset_x,
                                 double size, const char* title) {
  std::vector<PointId> results = outcome.result_ids;
  std::vector<PointId> candidates = outcome.candidate_ids;
  std::sort(results.begin(), results.end());
  std::sort(candidates.begin(), candidates.end());

  const double scale = size / std::max(view.width(), view.height());
  auto sx = [&](double x) { return offset_x + (x - view.min_x) * scale; };
  auto sy = [&](double y) { return size - (y - view.min_y) * scale; };
  char buf[256];

  std::snprintf(buf, sizeof buf,
                "<g><rect x=\"%.2f\" y=\"0\" width=\"%.2f\" height=\"%.2f\" fill=\"white\" "
                "stroke=\"#888\"/>\n<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\">%s</text>\n",
                offset_x, size, size, offset_x + 8, size + 18, title);
  svg += buf;

  SvgPanelCounts counts;
  std::string gray, green, black;
  data.rtree.visit_window(view, [&](const Point& p) {
    const bool is_result = std::binary_search(results.begin(), results.end(), p.id);
    const bool is_candidate = std::binary_search(candidates.begin(), candidates.end(), p.id);
    std::string* layer = &gray;
    if (is_result) {
      layer = &black;
      ++counts.black;
    } else if (is_candidate) {
      layer = &green;
      ++counts.green;
    } else {
      ++counts.gray;
    }
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.6\"/>\n", sx(p.x), sy(p.y));
    *layer += buf;
  });
  svg += "<g fill=\"#bbbbbb\" class=\"other\">\n" + gray + "</g>\n";
  svg += "<g fill=\"green\" class=\"candidate\">\n" + green + "</g>\n";
  svg += "<g fill=\"black\" class=\"result\">\n" + black + "</g>\n";

  svg += "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
  for (Vec2 v : area.vertices()) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(v.x), sy(v.y));
    svg += buf;
  }
  svg += "\"/>\n</g>\n";
  return counts;
}

}  // namespace detail

/// Side-by-side drawing of one query: the baseline on the left, the
/// Voronoi traversal on the right. Results are black, candidates that
/// failed the containment test green, other points gray. Only points near
/// the query (its MBR grown by 20% per side) are drawn.
inline SvgCounts render_svg(const Dataset& data, const Polygon& area, const QueryOutcome& voronoi,
                            const QueryOutcome& traditional, const std::filesystem::path& path) {
  const Rect box = mbr(area);
  const double side = std::max(box.width(), box.height()) * 1.4;
  const double cx = (box.min_x + box.max_x) / 2.0, cy = (box.min_y + box.max_y) / 2.0;
  const Rect view{cx - side / 2, cy - side / 2, cx + side / 2, cy + side / 2};

  constexpr double panel = 500.0, gap = 20.0;
  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n",
                2 * panel + gap, panel + 28);
  svg += buf;
  SvgCounts counts;
  char left[96], right[96];
  std::snprintf(left, sizeof left, "(a) R-tree filter-refine: %zu candidates",
                traditional.candidate_count);
  std::snprintf(right, sizeof right, "(b) Voronoi traversal: %zu candidates", voronoi.candidate_count);
  counts.traditional = detail::draw_panel(svg, data, area, traditional, view, 0.0, panel, left);
  counts.voronoi = detail::draw_panel(svg, data, area, voronoi, view, panel + gap, panel, right);
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << svg;
  if (!out) throw io_error("write failed: " + path.string());
  return counts;
}

}  // namespace vaq
