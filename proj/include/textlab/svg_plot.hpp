#pragma once

#include <array>
#include <string>
#include <vector>

#include "textlab/nn.hpp"

namespace textlab {

// Deterministic SVG emitters: identical inputs give byte-identical output,
// no graphics dependencies. Coordinates are quantized to 0.01 px.

// One circle per point, colored by label (fixed palette cycled in label
// first-appearance order), axes auto-scaled with a 5% margin, legend block.
std::string render_scatter(const std::vector<std::array<double, 2>>& coords,
                           const std::vector<std::string>& color_key,
                           const std::string& title);

// One horizontal-bar panel per topic; bar lengths proportional to the term
// probabilities within each panel.
std::string render_topic_bars(
    const std::vector<std::vector<std::pair<std::string, double>>>& topics,
    const std::string& title);

// Two panels (accuracy, loss), one train and one validation line per named
// history. Series names should carry architecture and dropout rate.
std::string render_curves(
    const std::vector<std::pair<std::string, RunHistory>>& series,
    const std::string& title);

std::string xml_escape(const std::string& s);

}  // namespace textlab
