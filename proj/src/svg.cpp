#include "sgdom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sgdom {

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<CsvRow>& rows, const SvgConfig& cfg) {
    std::vector<const CsvRow*> kept;
    kept.reserve(rows.size());
    for (const auto& r : rows) {
        if (std::isfinite(r.re) && std::isfinite(r.im) && r.im >= 0.0) kept.push_back(&r);
    }

    double xmin = -1.0, xmax = 1.0, ymax = 1.0;
    if (!kept.empty()) {
        xmin = kept.front()->re;
        xmax = xmin;
        ymax = 0.0;
        for (const auto* r : kept) {
            xmin = std::min(xmin, r->re);
            xmax = std::max(xmax, r->re);
            ymax = std::max(ymax, r->im);
        }
    }
    if (xmax - xmin < 1e-9) {
        const double pad = std::max(1.0, std::abs(xmin)) * 0.5;
        xmin -= pad;
        xmax += pad;
    }
    if (ymax < 1e-9) ymax = 1.0;
    const double xpad = 0.08 * (xmax - xmin);
    xmin -= xpad;
    xmax += xpad;
    ymax *= 1.08;

    const double ml = 62, mr = 20, mt = 34, mb = 44;
    const double pw = cfg.width - ml - mr;
    const double ph = cfg.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + (ymax - y) / ymax * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << cfg.width
       << "\" height=\"" << cfg.height << "\" viewBox=\"0 0 " << cfg.width << " " << cfg.height
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!cfg.title.empty()) {
        os << "<text x=\"" << cfg.width / 2.0
           << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">"
           << escape_xml(cfg.title) << "</text>\n";
    }

    os << "<g stroke=\"#d0d0d0\" stroke-width=\"1\">\n";
    const int nticks = 5;
    for (int k = 0; k <= nticks; ++k) {
        const double xv = xmin + (xmax - xmin) * k / nticks;
        const double yv = ymax * k / nticks;
        os << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << fmt(mt) << "\" x2=\"" << fmt(px(xv))
           << "\" y2=\"" << fmt(mt + ph) << "\"/>\n";
        os << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << fmt(ml + pw)
           << "\" y2=\"" << fmt(py(yv)) << "\"/>\n";
    }
    os << "</g>\n";

    if (xmin < 0.0 && xmax > 0.0) {
        os << "<line x1=\"" << fmt(px(0.0)) << "\" y1=\"" << fmt(mt) << "\" x2=\""
           << fmt(px(0.0)) << "\" y2=\"" << fmt(mt + ph)
           << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    }

    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (int k = 0; k <= nticks; ++k) {
        const double xv = xmin + (xmax - xmin) * k / nticks;
        const double yv = ymax * k / nticks;
        os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(mt + ph + 16)
           << "\" text-anchor=\"middle\">" << fmt_tick(xv) << "</text>\n";
        os << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(py(yv) + 4)
           << "\" text-anchor=\"end\">" << fmt_tick(yv) << "</text>\n";
    }
    os << "<text x=\"" << cfg.width / 2.0 << "\" y=\"" << cfg.height - 8
       << "\" text-anchor=\"middle\">Re</text>\n";
    os << "<text x=\"14\" y=\"" << mt + ph / 2.0 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << fmt(mt + ph / 2.0) << ")\">Im</text>\n";
    os << "</g>\n";

    os << "<g fill=\"#4878a8\" fill-opacity=\"0.35\">\n";
    for (const auto* r : kept) {
        if (r->kind == "cloud") {
            os << "<circle cx=\"" << fmt(px(r->re)) << "\" cy=\"" << fmt(py(r->im))
               << "\" r=\"2\"/>\n";
        }
    }
    os << "</g>\n";

    os << "<g stroke=\"#2e8540\" stroke-width=\"1.5\" fill=\"none\">\n";
    bool open = false;
    bool prev_kept = false;
    double prev_omega = 0.0;
    for (const auto& r : rows) {
        if (r.kind != "region") continue;
        const bool keep = std::isfinite(r.re) && std::isfinite(r.im) && r.im >= 0.0;
        if (!keep) {
            prev_kept = false;
            continue;
        }
        if (!open || !prev_kept || r.omega != prev_omega) {
            if (open) os << "\"/>\n";
            os << "<polyline points=\"";
            open = true;
        } else {
            os << ' ';
        }
        os << fmt(px(r.re)) << ',' << fmt(py(r.im));
        prev_kept = true;
        prev_omega = r.omega;
    }
    if (open) os << "\"/>\n";
    os << "</g>\n";

    os << "<g stroke=\"#c23b22\" stroke-width=\"1.5\">\n";
    for (const auto* r : kept) {
        if (r->kind == "eigen") {
            const double x = px(r->re), y = py(r->im);
            os << "<line x1=\"" << fmt(x - 3) << "\" y1=\"" << fmt(y - 3) << "\" x2=\""
               << fmt(x + 3) << "\" y2=\"" << fmt(y + 3) << "\"/>\n";
            os << "<line x1=\"" << fmt(x - 3) << "\" y1=\"" << fmt(y + 3) << "\" x2=\""
               << fmt(x + 3) << "\" y2=\"" << fmt(y - 3) << "\"/>\n";
        }
    }
    os << "</g>\n";

    if (kept.empty()) {
        os << "<text x=\"" << cfg.width / 2.0 << "\" y=\"" << mt + ph / 2.0
           << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
              "fill=\"#666666\">no points to draw</text>\n";
    }

    os << "</svg>\n";
    return os.str();
}

}  // namespace sgdom
