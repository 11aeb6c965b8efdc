#ifndef SGDOM_SVG_HPP
#define SGDOM_SVG_HPP

#include "sgdom/csv.hpp"

#include <string>
#include <vector>

namespace sgdom {

struct SvgConfig {
    int width = 760;
    int height = 560;
    std::string title;
};

/// Renders exported rows as a static SVG 1.1 scatter plot of the upper
/// half-plane: cloud points as translucent dots, eigen points as
/// crosses, region rows as outlines connected per frequency. Rows with
/// negative imaginary part are skipped; every drawn mark corresponds to
/// an input row.
std::string render_svg(const std::vector<CsvRow>& rows, const SvgConfig& cfg);

}  // namespace sgdom

#endif  // SGDOM_SVG_HPP
