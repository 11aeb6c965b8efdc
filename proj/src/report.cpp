#include "sgdom/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sgdom {

namespace {

using nlohmann::json;

json num_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num_from(const json& j, const char* field) {
    const json& v = j.at(field);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw std::runtime_error(std::string("report: field '") + field + "' is not a number");
}

json complex_json(const Complex& z) {
    return json::array({num_json(z.real()), num_json(z.imag())});
}

Complex complex_from(const json& j, const char* field) {
    const json& v = j.at(field);
    if (!v.is_array() || v.size() != 2) {
        throw std::runtime_error(std::string("report: field '") + field +
                                 "' is not a [re, im] pair");
    }
    auto part = [](const json& p) {
        if (p.is_number()) return p.get<double>();
        if (p.is_string()) {
            const std::string s = p.get<std::string>();
            if (s == "inf") return std::numeric_limits<double>::infinity();
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        }
        throw std::runtime_error("report: complex part is not a number");
    };
    return Complex(part(v[0]), part(v[1]));
}

Verdict verdict_from(const std::string& s) {
    if (s == "certified") return Verdict::certified;
    if (s == "separation-failed") return Verdict::separation_failed;
    if (s == "assumption-failed") return Verdict::assumption_failed;
    throw std::runtime_error("report: unknown verdict '" + s + "'");
}

std::string short_num(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_report_text(const ReportDocument& doc) {
    const DominanceReport& r = doc.result;
    std::ostringstream os;
    os << doc.provenance.tool << " " << doc.provenance.version << " dominance report\n";
    os << "plant:              " << doc.provenance.plant << "\n";
    os << "controller:         " << doc.provenance.controller << "\n";
    os << "open-loop indices:  p1 = " << r.p1 << ", p2 = " << r.p2 << "\n";
    os << "well-posed:         " << (r.well_posed ? "yes" : "no") << "\n";
    os << "no cancellation:    " << (r.no_cancellation ? "yes" : "no") << "\n";
    os << "separation:         " << (r.separation.holds ? "holds" : "fails");
    os << " (margin " << short_num(r.separation.margin);
    os << " at omega = " << short_num(r.separation.worst.omega);
    os << ", tau = " << short_num(r.separation.worst.tau) << ")";
    if (r.separation.marginal) os << " [marginal]";
    os << "\n";
    if (r.separation.vacuous_frequencies > 0) {
        os << "vacuous frequencies: " << r.separation.vacuous_frequencies
           << " (zero controller response)\n";
    }
    os << "verdict:            " << to_string(r.verdict);
    if (r.verdict == Verdict::certified) os << " " << r.claimed << "-dominant";
    os << "\n";
    if (r.oracle_ran) {
        os << "oracle:             p = " << r.oracle_p << ", "
           << (r.oracle_agrees ? "agrees" : "disagrees") << "\n";
    } else {
        os << "oracle:             not run\n";
    }
    os << "honesty:            " << r.honesty << "\n";
    os << "grids:              " << doc.provenance.wpoints << " interior omega in ["
       << short_num(doc.provenance.wmin) << ", " << short_num(doc.provenance.wmax) << "], "
       << doc.provenance.taupoints << " tau points\n";
    os << "budgets:            N = " << doc.provenance.samples << ", refine = "
       << doc.provenance.refine << ", seed = " << doc.provenance.seed << ", eps = "
       << short_num(doc.provenance.eps) << ", tol = " << short_num(doc.provenance.tol) << "\n";
    return os.str();
}

std::string render_report_json(const ReportDocument& doc) {
    const DominanceReport& r = doc.result;
    json j;
    j["provenance"] = {
        {"tool", doc.provenance.tool},
        {"version", doc.provenance.version},
        {"plant", doc.provenance.plant},
        {"controller", doc.provenance.controller},
        {"seed", doc.provenance.seed},
        {"samples", doc.provenance.samples},
        {"refine", doc.provenance.refine},
        {"wpoints", doc.provenance.wpoints},
        {"taupoints", doc.provenance.taupoints},
        {"wmin", num_json(doc.provenance.wmin)},
        {"wmax", num_json(doc.provenance.wmax)},
        {"eps", num_json(doc.provenance.eps)},
        {"tol", num_json(doc.provenance.tol)},
        {"oracle_enabled", doc.provenance.oracle_enabled},
    };
    j["result"] = {
        {"p1", r.p1},
        {"p2", r.p2},
        {"well_posed", r.well_posed},
        {"no_cancellation", r.no_cancellation},
        {"verdict", to_string(r.verdict)},
        {"claimed", r.claimed},
        {"oracle_ran", r.oracle_ran},
        {"oracle_p", r.oracle_p},
        {"oracle_agrees", r.oracle_agrees},
        {"margin", num_json(r.margin)},
        {"honesty", r.honesty},
    };
    j["result"]["separation"] = {
        {"holds", r.separation.holds},
        {"marginal", r.separation.marginal},
        {"margin", num_json(r.separation.margin)},
        {"vacuous_frequencies", r.separation.vacuous_frequencies},
        {"worst",
         {
             {"omega", num_json(r.separation.worst.omega)},
             {"tau", num_json(r.separation.worst.tau)},
             {"distance", num_json(r.separation.worst.distance)},
             {"z1", complex_json(r.separation.worst.z1)},
             {"z2", complex_json(r.separation.worst.z2)},
         }},
    };
    return j.dump(2) + "\n";
}

ReportDocument parse_report_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("report: ") + e.what());
    }
    ReportDocument doc;
    const json& p = j.at("provenance");
    doc.provenance.tool = p.at("tool").get<std::string>();
    doc.provenance.version = p.at("version").get<std::string>();
    doc.provenance.plant = p.at("plant").get<std::string>();
    doc.provenance.controller = p.at("controller").get<std::string>();
    doc.provenance.seed = p.at("seed").get<std::uint64_t>();
    doc.provenance.samples = p.at("samples").get<int>();
    doc.provenance.refine = p.at("refine").get<int>();
    doc.provenance.wpoints = p.at("wpoints").get<int>();
    doc.provenance.taupoints = p.at("taupoints").get<int>();
    doc.provenance.wmin = num_from(p, "wmin");
    doc.provenance.wmax = num_from(p, "wmax");
    doc.provenance.eps = num_from(p, "eps");
    doc.provenance.tol = num_from(p, "tol");
    doc.provenance.oracle_enabled = p.at("oracle_enabled").get<bool>();

    const json& r = j.at("result");
    doc.result.p1 = r.at("p1").get<int>();
    doc.result.p2 = r.at("p2").get<int>();
    doc.result.well_posed = r.at("well_posed").get<bool>();
    doc.result.no_cancellation = r.at("no_cancellation").get<bool>();
    doc.result.verdict = verdict_from(r.at("verdict").get<std::string>());
    doc.result.claimed = r.at("claimed").get<int>();
    doc.result.oracle_ran = r.at("oracle_ran").get<bool>();
    doc.result.oracle_p = r.at("oracle_p").get<int>();
    doc.result.oracle_agrees = r.at("oracle_agrees").get<bool>();
    doc.result.margin = num_from(r, "margin");
    doc.result.honesty = r.at("honesty").get<std::string>();

    const json& s = r.at("separation");
    doc.result.separation.holds = s.at("holds").get<bool>();
    doc.result.separation.marginal = s.at("marginal").get<bool>();
    doc.result.separation.margin = num_from(s, "margin");
    doc.result.separation.vacuous_frequencies = s.at("vacuous_frequencies").get<int>();
    const json& w = s.at("worst");
    doc.result.separation.worst.omega = num_from(w, "omega");
    doc.result.separation.worst.tau = num_from(w, "tau");
    doc.result.separation.worst.distance = num_from(w, "distance");
    doc.result.separation.worst.z1 = complex_from(w, "z1");
    doc.result.separation.worst.z2 = complex_from(w, "z2");
    return doc;
}

}  // namespace sgdom
