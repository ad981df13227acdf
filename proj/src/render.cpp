#include "snowflake/render.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "snowflake/error.hpp"

namespace snowflake {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_disk_svg(const SnowflakeParams& params, int vertex, std::int64_t power,
                            const RenderOptions& options) {
  if (params.z2) throw Error(Errc::DomainError, "rendering needs a snowflake family");
  SnowflakeBuilder builder(params);
  const double size = options.size;
  const double cx = size / 2;
  const double cy = size / 2;
  const double root_radius = size / 9;
  const double shrink = 1.0 / std::sqrt(params.r.value());

  std::ostringstream body;
  std::function<void(const SnowflakeNode&, double, double, double, double, double, int)> draw =
      [&](const SnowflakeNode& node, double x, double y, double radius, double heading, double spread, int depth) {
        // Half polygon facing `heading`: one side per edge letter plus the base.
        const int sides = std::max(node.width, 1);
        std::string points;
        for (int i = 0; i <= sides; ++i) {
          const double a = heading - std::numbers::pi / 2 + std::numbers::pi * i / sides;
          points += num(x + radius * std::cos(a)) + "," + num(y - radius * std::sin(a)) + " ";
        }
        body << "  <polygon points=\"" << points << "\" fill=\"" << (node.terminal ? "#cfe3f3" : "#f3e2c7")
             << "\" stroke=\"#333\" stroke-width=\"" << num(std::max(0.3, radius / 40)) << "\"/>\n";
        if (node.terminal || depth >= options.max_depth) return;
        const auto count = static_cast<double>(node.children.size());
        for (std::size_t t = 0; t < node.children.size(); ++t) {
          const double a = heading - spread / 2 + spread * (static_cast<double>(t) + 0.5) / count;
          const double child_radius = radius * shrink;
          const double reach = radius + child_radius * 2.2;
          const double sx = x + radius * std::cos(a), sy = y - radius * std::sin(a);
          const double ex = x + reach * std::cos(a), ey = y - reach * std::sin(a);
          body << "  <line x1=\"" << num(sx) << "\" y1=\"" << num(sy) << "\" x2=\"" << num(ex) << "\" y2=\""
               << num(ey) << "\" stroke=\"#8a8a8a\" stroke-width=\"" << num(std::max(0.3, child_radius / 3))
               << "\"/>\n";
          draw(*node.children[t].node, ex, ey, child_radius, a, spread / count * 1.2, depth + 1);
        }
      };

  NodePtr pos = builder.build(vertex, power, Sign::Positive);
  NodePtr neg = builder.build(vertex, power, Sign::Negative);
  draw(*pos, cx, cy, root_radius, std::numbers::pi / 2, std::numbers::pi, 0);
  draw(*neg, cx, cy, root_radius, -std::numbers::pi / 2, std::numbers::pi, 0);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\"" << options.size
      << "\" viewBox=\"0 0 " << options.size << " " << options.size << "\">\n";
  svg << "  <title>disk for c_" << vertex + 1 << "^" << power << ", r = " << params.r.str() << "</title>\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << body.str();
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace snowflake
