#include "sgdom/cli.hpp"

#include "sgdom/csv.hpp"
#include "sgdom/parallel.hpp"
#include "sgdom/principal.hpp"
#include "sgdom/report.hpp"
#include "sgdom/sgraph.hpp"
#include "sgdom/svg.hpp"
#include "sgdom/sysfile.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace sgdom {

namespace {

namespace fs = std::filesystem;

std::string write_artifact(const std::string& out_dir, const std::string& filename,
                           const std::string& content) {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / filename;
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << content;
    return path.string();
}

ReportProvenance make_provenance(const CommonFlags& flags, const std::string& plant,
                                 const std::string& controller) {
    ReportProvenance prov;
    prov.plant = plant;
    prov.controller = controller;
    prov.seed = flags.seed;
    prov.samples = flags.samples;
    prov.refine = flags.refine;
    prov.wpoints = flags.wpoints;
    prov.taupoints = flags.taupoints;
    prov.wmin = flags.wmin;
    prov.wmax = flags.wmax;
    prov.eps = flags.eps;
    prov.tol = flags.tol;
    prov.oracle_enabled = !flags.no_oracle;
    return prov;
}

void append_cloud_rows(std::vector<CsvRow>& rows, const SGCloud& cloud, double omega) {
    for (const auto& pt : dedupe_points(cloud.points)) {
        const Complex up = pt.upper();
        rows.push_back({omega, 1.0, up.real(), up.imag(), "upper", "cloud"});
        const Complex lo = pt.lower();
        rows.push_back({omega, 1.0, lo.real(), lo.imag(), "lower", "cloud"});
    }
}

void append_eigen_rows(std::vector<CsvRow>& rows, const Eigen::MatrixXcd& G, double omega) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(G, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const Complex lam = es.eigenvalues()(i);
        rows.push_back(
            {omega, 1.0, lam.real(), lam.imag(), lam.imag() >= 0.0 ? "upper" : "lower", "eigen"});
    }
}

void append_region_rows(std::vector<CsvRow>& rows, const PrincipalRegion& region, double omega) {
    const double pmin = region.annulus ? -M_PI : region.phase_min;
    const double pmax = region.annulus ? M_PI : region.phase_max;
    constexpr int kArc = 24;
    auto push = [&](double r, double phi) {
        rows.push_back({omega, 1.0, r * std::cos(phi), r * std::sin(phi), "upper", "region"});
    };
    for (int k = 0; k <= kArc; ++k) {
        push(region.gain_max, pmin + (pmax - pmin) * k / kArc);
    }
    for (int k = 0; k <= kArc; ++k) {
        push(region.gain_min, pmax - (pmax - pmin) * k / kArc);
    }
    push(region.gain_max, pmin);
}

int load_pair(const std::string& p_path, const std::string& c_path, std::ostream& err,
              std::unique_ptr<SystemFile>& p, std::unique_ptr<SystemFile>& c) {
    try {
        p = std::make_unique<SystemFile>(load_system(p_path));
        c = std::make_unique<SystemFile>(load_system(c_path));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (p->system.size() != c->system.size()) {
        err << "error: dimension mismatch: " << p->name << " is " << p->system.size() << "x"
            << p->system.size() << " but " << c->name << " is " << c->system.size() << "x"
            << c->system.size() << "\n";
        return kExitUsage;
    }
    return kExitSuccess;
}

}  // namespace

SweepConfig make_sweep_config(const CommonFlags& flags) {
    SweepConfig cfg;
    cfg.omegas = SweepConfig::omega_grid(flags.wmin, flags.wmax, flags.wpoints);
    cfg.taus = SweepConfig::tau_grid(flags.taupoints);
    cfg.cloud.samples = flags.samples;
    cfg.cloud.refine_iters = flags.refine;
    cfg.cloud.seed = flags.seed;
    cfg.eps = flags.eps;
    cfg.tol = flags.tol;
    cfg.run_oracle = !flags.no_oracle;
    return cfg;
}

int run_sg(const std::string& system_path, const CommonFlags& flags, std::ostream& out,
           std::ostream& err) {
    std::unique_ptr<SystemFile> sys;
    try {
        sys = std::make_unique<SystemFile>(load_system(system_path));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const SweepConfig cfg = make_sweep_config(flags);

    const std::size_t n = cfg.omegas.size();
    std::vector<std::vector<CsvRow>> per_freq(n);
    try {
        parallel_for(n, cfg.parallel, [&](std::size_t i) {
            const double w = cfg.omegas[i];
            const Eigen::MatrixXcd G = sys->system.eval(w);
            CloudConfig ccfg = cfg.cloud;
            ccfg.stream = i;
            const SGCloud cloud = sg_cloud(G, ccfg);
            append_cloud_rows(per_freq[i], cloud, w);
            append_eigen_rows(per_freq[i], G, w);
        });
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<CsvRow> rows;
    bool any_cloud = false;
    for (const auto& chunk : per_freq) {
        for (const auto& row : chunk) {
            any_cloud = any_cloud || row.kind == "cloud";
            rows.push_back(row);
        }
    }
    if (!any_cloud) {
        err << "warning: " << sys->name
            << " has identically zero response; the scaled graph is empty\n";
    }

    std::ostringstream csv;
    write_csv(csv, rows);
    SvgConfig svg_cfg;
    svg_cfg.title = sys->name + ": scaled graph and eigenvalues";
    const std::string svg = render_svg(rows, svg_cfg);
    try {
        const std::string csv_path = write_artifact(flags.out, sys->name + "_sg.csv", csv.str());
        const std::string svg_path = write_artifact(flags.out, sys->name + "_sg.svg", svg);
        out << "system:      " << sys->name << " (" << sys->system.size() << "x"
            << sys->system.size() << ", " << sys->kind << ")\n";
        out << "frequencies: " << n << "\n";
        out << "rows:        " << rows.size() << "\n";
        out << "csv:         " << csv_path << "\n";
        out << "svg:         " << svg_path << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitSuccess;
}

int run_feedback(const std::string& p_path, const std::string& c_path, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err) {
    std::unique_ptr<SystemFile> p;
    std::unique_ptr<SystemFile> c;
    if (const int rc = load_pair(p_path, c_path, err, p, c); rc != kExitSuccess) return rc;

    const SweepConfig cfg = make_sweep_config(flags);
    const FeedbackLoop loop{p->system, c->system};

    ReportDocument doc;
    doc.provenance = make_provenance(flags, p->name, c->name);
    try {
        doc.result = dominance_theorem(loop, cfg);
    } catch (const oracle_mismatch_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitSeparationFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitAssumptionFailed;
    }

    out << render_report_text(doc);
    try {
        const std::string path = write_artifact(
            flags.out, p->name + "_" + c->name + "_report.json", render_report_json(doc));
        out << "report:             " << path << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    switch (doc.result.verdict) {
        case Verdict::certified: return kExitSuccess;
        case Verdict::separation_failed: return kExitSeparationFailed;
        case Verdict::assumption_failed: return kExitAssumptionFailed;
    }
    return kExitUsage;
}

int run_principal(const std::string& system_path, const CommonFlags& flags, std::ostream& out,
                  std::ostream& err) {
    std::unique_ptr<SystemFile> sys;
    try {
        sys = std::make_unique<SystemFile>(load_system(system_path));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const SweepConfig cfg = make_sweep_config(flags);

    struct FreqRow {
        PrincipalData data;
        PrincipalRegion region;
        bool contains_minus_one = false;
        std::vector<CsvRow> rows;
    };
    const std::size_t n = cfg.omegas.size();
    std::vector<FreqRow> freq(n);
    try {
        parallel_for(n, cfg.parallel, [&](std::size_t i) {
            const double w = cfg.omegas[i];
            const Eigen::MatrixXcd G = sys->system.eval(w);
            FreqRow fr;
            fr.data = principal_values(G);
            fr.region = principal_region(G);
            fr.contains_minus_one = region_contains(fr.region, Complex(-1.0, 0.0), 1e-9);
            append_region_rows(fr.rows, fr.region, w);
            append_eigen_rows(fr.rows, G, w);
            freq[i] = std::move(fr);
        });
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ostringstream table;
    table << "# principal values of " << sys->name << "\n";
    for (std::size_t i = 0; i < n; ++i) {
        const FreqRow& fr = freq[i];
        table << "omega " << format_double(cfg.omegas[i]) << ": gains";
        for (double g : fr.data.gains) table << ' ' << format_double(g);
        table << "; phases";
        for (double ph : fr.data.phases) table << ' ' << format_double(ph);
        table << "; region " << (fr.region.annulus ? "annulus" : "sector") << " ["
              << format_double(fr.region.gain_min) << ", " << format_double(fr.region.gain_max)
              << "]";
        if (!fr.region.annulus) {
            table << " phase [" << format_double(fr.region.phase_min) << ", "
                  << format_double(fr.region.phase_max) << "]";
        }
        table << "; -1 inside: " << (fr.contains_minus_one ? "yes" : "no") << "\n";
    }

    std::vector<CsvRow> rows;
    for (const auto& fr : freq) {
        rows.insert(rows.end(), fr.rows.begin(), fr.rows.end());
    }
    std::ostringstream csv;
    write_csv(csv, rows);
    SvgConfig svg_cfg;
    svg_cfg.title = sys->name + ": principal regions and eigenvalues";
    try {
        const std::string txt_path =
            write_artifact(flags.out, sys->name + "_principal.txt", table.str());
        const std::string csv_path =
            write_artifact(flags.out, sys->name + "_principal.csv", csv.str());
        const std::string svg_path =
            write_artifact(flags.out, sys->name + "_principal.svg", render_svg(rows, svg_cfg));
        out << table.str();
        out << "table: " << txt_path << "\n";
        out << "csv:   " << csv_path << "\n";
        out << "svg:   " << svg_path << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitSuccess;
}

int run_certify(const std::string& p_path, const std::string& c_path, const std::string& mode,
                const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    if (mode != "gain" && mode != "phase" && mode != "passivity") {
        err << "error: unknown mode '" << mode << "' (expected gain, phase or passivity)\n";
        return kExitUsage;
    }
    std::unique_ptr<SystemFile> p;
    std::unique_ptr<SystemFile> c;
    if (const int rc = load_pair(p_path, c_path, err, p, c); rc != kExitSuccess) return rc;

    const SweepConfig cfg = make_sweep_config(flags);
    CorollaryReport rep;
    try {
        rep = corollary_checks({p->system, c->system}, cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitAssumptionFailed;
    }

    bool pass = false;
    if (mode == "gain") {
        pass = rep.small_gain;
        out << "small gain: " << (pass ? "holds" : "fails") << "\n";
        out << "worst gain product: " << format_double(rep.worst_gain_product) << " at omega = "
            << format_double(rep.worst_gain_omega) << " (needs < 1)\n";
    } else if (mode == "phase") {
        pass = rep.small_phase;
        out << "small phase: " << (pass ? "holds" : "fails") << "\n";
        out << "worst phase sum: " << format_double(rep.worst_phase_sum) << " at omega = "
            << format_double(rep.worst_phase_omega) << " (needs < pi)\n";
    } else {
        pass = rep.passivity;
        out << "passivity: " << (pass ? "holds" : "fails") << "\n";
        out << "worst plant Hermitian part minimum: " << format_double(rep.worst_p_herm_min)
            << " at omega = " << format_double(rep.worst_p_herm_omega) << " (needs >= 0)\n";
        out << "worst controller Hermitian part maximum: " << format_double(rep.worst_c_herm_max)
            << " at omega = " << format_double(rep.worst_c_herm_omega) << " (needs < 0)\n";
    }
    return pass ? kExitSuccess : kExitSeparationFailed;
}

int run_oracle(const std::string& p_path, const std::string& c_path, const CommonFlags& flags,
               std::ostream& out, std::ostream& err) {
    std::unique_ptr<SystemFile> p;
    std::unique_ptr<SystemFile> c;
    if (const int rc = load_pair(p_path, c_path, err, p, c); rc != kExitSuccess) return rc;

    const FeedbackLoop loop{p->system, c->system};
    try {
        const RationalFunction phi = det_char(loop, flags.tol);
        const int count = closed_loop_dominance_oracle(loop, flags.tol);
        out << "phi(s) = det(I - P(s)C(s)) = (" << phi.num.to_string() << ") / ("
            << phi.den.to_string() << ")\n";
        out << "numerator coefficients (ascending):";
        for (double ck : phi.num.coeffs()) out << ' ' << format_double(ck);
        out << "\n";
        out << "orhp zero count: " << count << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitAssumptionFailed;
    }
    return kExitSuccess;
}

}  // namespace sgdom
