#pragma once

#include <string>

#include "tstar/planner.hpp"
#include "tstar/workspace.hpp"

namespace tstar {

struct SvgOptions {
  int cell_px = 10;
  bool layer_slices = false;  // required for 3-D workspaces
};

/// Renders the workspace plus an optional plan: obstacle cells filled,
/// labeled cells tinted and annotated, the prefix and suffix as distinct
/// polylines, and a legend carrying the suffix cost. 2-D only unless
/// layer_slices is set, in which case each z-layer is drawn as its own
/// grid. Throws ValidationError on a 3-D workspace without the flag.
std::string render_svg(const GridWorkspace& ws, const PlanResult* plan,
                       const SvgOptions& opt = {});

}  // namespace tstar
