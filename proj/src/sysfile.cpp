#include "sgdom/sysfile.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sgdom {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw sysfile_error(origin + ": " + what);
}

const json& require(const json& obj, const char* field, const std::string& origin) {
    const auto it = obj.find(field);
    if (it == obj.end()) {
        fail(origin, std::string("missing field '") + field + "'");
    }
    return *it;
}

std::vector<double> coeff_array(const json& j, const std::string& where,
                                const std::string& origin) {
    if (!j.is_array() || j.empty()) {
        fail(origin, "field '" + where + "' must be a nonempty array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) {
            fail(origin, "field '" + where + "' must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Eigen::MatrixXd real_matrix(const json& j, const std::string& where, const std::string& origin) {
    if (!j.is_array()) {
        fail(origin, "field '" + where + "' must be an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = 0;
    Eigen::MatrixXd out;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array()) {
            fail(origin, "field '" + where + "' row " + std::to_string(i) + " must be an array");
        }
        if (i == 0) {
            cols = static_cast<Eigen::Index>(row.size());
            out.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            fail(origin, "field '" + where + "' has ragged rows");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                fail(origin, "field '" + where + "' must contain only numbers");
            }
            out(i, k) = v.get<double>();
        }
    }
    return out;
}

TransferMatrix parse_rational(const json& doc, const std::string& origin) {
    const json& jm = require(doc, "m", origin);
    if (!jm.is_number_integer() || jm.get<int>() < 1) {
        fail(origin, "field 'm' must be a positive integer");
    }
    const int m = jm.get<int>();
    const json& grid = require(doc, "entries", origin);
    if (!grid.is_array() || static_cast<int>(grid.size()) != m) {
        fail(origin, "field 'entries' must be an array of " + std::to_string(m) + " rows");
    }
    std::vector<RationalFunction> entries;
    entries.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const json& row = grid[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != m) {
            fail(origin, "entries row " + std::to_string(i) + " must hold " + std::to_string(m) +
                             " entries");
        }
        for (int j = 0; j < m; ++j) {
            const std::string where =
                "entries[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            const json& cell = row[static_cast<std::size_t>(j)];
            if (!cell.is_object()) {
                fail(origin, where + " must be an object with 'num' and 'den'");
            }
            RationalFunction r;
            r.num = Polynomial(coeff_array(require(cell, "num", origin), where + ".num", origin));
            r.den = Polynomial(coeff_array(require(cell, "den", origin), where + ".den", origin));
            if (r.den.degree() < 0) {
                fail(origin, where + ".den must not be the zero polynomial");
            }
            entries.push_back(std::move(r));
        }
    }
    try {
        return TransferMatrix(m, std::move(entries));
    } catch (const std::exception& e) {
        fail(origin, e.what());
    }
}

TransferMatrix parse_statespace(const json& doc, const std::string& origin) {
    StateSpace ss;
    ss.A = real_matrix(require(doc, "A", origin), "A", origin);
    ss.B = real_matrix(require(doc, "B", origin), "B", origin);
    ss.C = real_matrix(require(doc, "C", origin), "C", origin);
    ss.D = real_matrix(require(doc, "D", origin), "D", origin);
    if (ss.A.rows() != ss.A.cols()) fail(origin, "field 'A' must be square");
    if (ss.B.rows() != ss.A.rows()) fail(origin, "fields 'A' and 'B' disagree on the order");
    if (ss.C.cols() != ss.A.rows()) fail(origin, "fields 'A' and 'C' disagree on the order");
    if (ss.D.rows() != ss.C.rows() || ss.D.cols() != ss.B.cols()) {
        fail(origin, "field 'D' shape must match C rows by B columns");
    }
    if (ss.C.rows() != ss.B.cols()) {
        fail(origin, "only square systems are supported (C rows must equal B columns)");
    }
    try {
        return TransferMatrix::from_state_space(ss);
    } catch (const std::exception& e) {
        fail(origin, e.what());
    }
}

}  // namespace

SystemFile parse_system(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, e.what());
    }
    if (!doc.is_object()) {
        fail(origin, "top-level value must be an object");
    }
    const json& jname = require(doc, "name", origin);
    const json& jkind = require(doc, "kind", origin);
    if (!jname.is_string()) fail(origin, "field 'name' must be a string");
    if (!jkind.is_string()) fail(origin, "field 'kind' must be a string");

    const std::string kind = jkind.get<std::string>();
    if (kind == "rational") {
        return SystemFile{jname.get<std::string>(), kind, parse_rational(doc, origin)};
    }
    if (kind == "statespace") {
        return SystemFile{jname.get<std::string>(), kind, parse_statespace(doc, origin)};
    }
    fail(origin, "field 'kind' must be \"rational\" or \"statespace\", got \"" + kind + "\"");
}

SystemFile load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw sysfile_error(path + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str(), path);
}

}  // namespace sgdom
