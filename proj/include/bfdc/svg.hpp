#pragma once

#include <filesystem>
#include <optional>

#include "bfdc/model.hpp"
#include "bfdc/regions.hpp"

namespace bfdc {

// Standalone line chart of the measured interface positions over time,
// overlaid (when rates are given) with the straight reference lines
// x = a1 - k0*t and x = b1 + k1*t. Pure polyline/text SVG, no external
// assets.
void write_interface_svg(const InterfaceTrack& track,
                         const std::optional<ExpansionRates>& rates, double a1,
                         double b1, const std::filesystem::path& path);

}  // namespace bfdc
