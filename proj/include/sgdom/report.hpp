#ifndef SGDOM_REPORT_HPP
#define SGDOM_REPORT_HPP

#include "sgdom/analysis.hpp"

#include <cstdint>
#include <string>

namespace sgdom {

inline constexpr const char* kToolVersion = "1.0.0";

/// Everything needed to reproduce a run: input names, seed, grid shape
/// and budgets.
struct ReportProvenance {
    std::string tool = "sgdom";
    std::string version = kToolVersion;
    std::string plant;
    std::string controller;
    std::uint64_t seed = 0;
    int samples = 0;
    int refine = 0;
    int wpoints = 0;
    int taupoints = 0;
    double wmin = 0.0;
    double wmax = 0.0;
    double eps = 0.0;
    double tol = 0.0;
    bool oracle_enabled = true;
};

/// A dominance verdict plus its provenance; renders as plain text for
/// the terminal and as a structured document that parses back without
/// loss.
struct ReportDocument {
    ReportProvenance provenance;
    DominanceReport result;
};

std::string render_report_text(const ReportDocument& doc);

std::string render_report_json(const ReportDocument& doc);

/// Inverse of render_report_json. Throws std::runtime_error on
/// malformed input.
ReportDocument parse_report_json(const std::string& text);

}  // namespace sgdom

#endif  // SGDOM_REPORT_HPP
