#pragma once

#include <cstdint>
#include <string>

#include "snowflake/snowflake_words.hpp"

namespace snowflake {

struct RenderOptions {
  int size = 800;       // canvas side in pixels
  int max_depth = 6;    // subtrees below this depth are omitted
};

// Static SVG of the disk for c_v^N: the central polygon of each half with
// strips leading to the child diagrams, placed radially outward.
std::string render_disk_svg(const SnowflakeParams& params, int vertex, std::int64_t power,
                            const RenderOptions& options = {});

}  // namespace snowflake
