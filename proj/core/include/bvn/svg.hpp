#pragma once

#include <string>

#include "bvn/diagram.hpp"

namespace bvn {

// Deterministic SVG 1.1 rendering of a layered diagram: one row per slice,
// wires at fixed horizontal pitch, positive crossings drawn with the left
// strand on top, white vertices as labelled circles.
std::string render_svg(const Diagram& d);

std::string render_svg(const Element& v);

}  // namespace bvn
