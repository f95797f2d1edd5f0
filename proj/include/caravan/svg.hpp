#pragma once

#include <string>

#include "caravan/cut_diagram.hpp"
#include "caravan/strata_g1.hpp"

namespace caravan::svg {

// Deterministic SVG: solid downward cuts to a fixed baseline, dots at the cut
// tops, matching arcs above the baseline. Byte-identical for identical input.
std::string render(const cut::CutDiagram& d);

// Smooth configurations render like cut diagrams; singular ones show the two
// glued points with dashed separatrices.
std::string render(const strata::G1Configuration& c);

}  // namespace caravan::svg
