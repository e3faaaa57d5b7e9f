#include "tstar/svg.hpp"

#include <sstream>

namespace tstar {

namespace {

// Layers are stacked vertically with a small gutter.
struct Layout {
  int cell, gutter, width, height, depth;
  double x(const Cell& c) const { return (c.x + 0.5) * cell; }
  double y(const Cell& c) const {
    return (c.y + 0.5) * cell + c.z * (height * cell + gutter);
  }
  int total_w() const { return width * cell; }
  int total_h() const { return depth * height * cell + (depth - 1) * gutter + legend_px; }
  static constexpr int legend_px = 18;
};

void rect(std::ostringstream& out, const Layout& lay, const Cell& c, const char* fill,
          const char* cls) {
  out << "  <rect class=\"" << cls << "\" x=\"" << c.x * lay.cell << "\" y=\""
      << c.y * lay.cell + c.z * (lay.height * lay.cell + lay.gutter) << "\" width=\"" << lay.cell
      << "\" height=\"" << lay.cell << "\" fill=\"" << fill << "\"/>\n";
}

void polyline(std::ostringstream& out, const Layout& lay, const std::vector<Cell>& cells,
              const char* cls, const char* stroke, const char* dash) {
  if (cells.empty()) return;
  out << "  <polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << stroke
      << "\" stroke-width=\"2\"";
  if (dash[0]) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ' ';
    out << lay.x(cells[i]) << ',' << lay.y(cells[i]);
  }
  out << "\"/>\n";
}

}  // namespace

std::string render_svg(const GridWorkspace& ws, const PlanResult* plan, const SvgOptions& opt) {
  if (ws.is_3d() && !opt.layer_slices)
    throw ValidationError("workspace is 3-D; rendering needs per-layer slices enabled");
  Layout lay{opt.cell_px, 12, ws.width(), ws.height(), ws.depth()};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << lay.total_w() << "\" height=\""
      << lay.total_h() << "\" viewBox=\"0 0 " << lay.total_w() << ' ' << lay.total_h()
      << "\">\n";
  out << "  <rect width=\"" << lay.total_w() << "\" height=\"" << lay.total_h()
      << "\" fill=\"white\"/>\n";

  for (std::uint32_t idx = 0; idx < ws.num_cells(); ++idx) {
    Cell c = ws.cell_at(idx);
    if (ws.is_obstacle(c)) rect(out, lay, c, "#333333", "obstacle");
  }
  for (const auto& [idx, props] : ws.labels()) {
    Cell c = ws.cell_at(idx);
    rect(out, lay, c, "#ffe08a", "label");
    std::string text;
    for (const auto& p : props) {
      if (!text.empty()) text += ",";
      text += p;
    }
    out << "  <text class=\"label-name\" x=\"" << lay.x(c) << "\" y=\"" << lay.y(c) + 3
        << "\" font-size=\"" << lay.cell * 0.6 << "\" text-anchor=\"middle\">" << text
        << "</text>\n";
  }
  rect(out, lay, ws.start(), "#9ad0f5", "start");

  if (plan) {
    // Prefix is drawn through its own cells plus the cycle entry point.
    std::vector<Cell> prefix = plan->concrete_prefix;
    if (!prefix.empty() && !plan->concrete_suffix.empty())
      prefix.push_back(plan->concrete_suffix.front());
    polyline(out, lay, prefix, "prefix", "#d95f02", "5,3");
    polyline(out, lay, plan->concrete_suffix, "suffix", "#1b6ca8", "");
  }

  out << "  <text class=\"legend\" x=\"4\" y=\"" << lay.total_h() - 5 << "\" font-size=\"12\">";
  if (plan)
    out << "suffix cost " << plan->suffix_cost.str() << ", prefix cost "
        << plan->prefix_cost.str();
  else
    out << "no plan";
  out << "</text>\n</svg>\n";
  return out.str();
}

}  // namespace tstar
