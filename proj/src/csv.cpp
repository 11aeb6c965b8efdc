#include "sgdom/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sgdom {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    out << "omega,tau,re,im,branch,kind\n";
    for (const auto& r : rows) {
        out << format_double(r.omega) << ',' << format_double(r.tau) << ','
            << format_double(r.re) << ',' << format_double(r.im) << ',' << r.branch << ','
            << r.kind << '\n';
    }
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t lineno = 0;
    auto bad = [&](const std::string& what) {
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (lineno == 1) {
            if (line != "omega,tau,re,im,branch,kind") bad("unexpected header");
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 6) bad("expected 6 fields");
        auto num = [&](const std::string& s) {
            if (s == "inf") return std::numeric_limits<double>::infinity();
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0') bad("not a number: " + s);
            return v;
        };
        CsvRow r;
        r.omega = num(fields[0]);
        r.tau = num(fields[1]);
        r.re = num(fields[2]);
        r.im = num(fields[3]);
        r.branch = fields[4];
        r.kind = fields[5];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace sgdom
