#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgdom/cli.hpp"
#include "sgdom/csv.hpp"
#include "sgdom/report.hpp"
#include "sgdom/svg.hpp"
#include "sgdom/sysfile.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

using namespace sgdom;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;

    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sgdom_cli_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CommonFlags quick_flags(const std::string& out) {
    CommonFlags flags;
    flags.wmin = 1e-2;
    flags.wmax = 1e2;
    flags.wpoints = 40;
    flags.samples = 150;
    flags.refine = 30;
    flags.out = out;
    return flags;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

}  // namespace

TEST_CASE("system file parsing diagnostics") {
    SUBCASE("valid rational file") {
        const auto sys = load_system(fixture("p_demo.json"));
        CHECK(sys.name == "p_demo");
        CHECK(sys.kind == "rational");
        CHECK(sys.system.size() == 1);
    }

    SUBCASE("valid state-space file") {
        const auto sys = load_system(fixture("ss_rhp1.json"));
        CHECK(sys.kind == "statespace");
        CHECK(sys.system.realization().has_value());
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_system(fixture("no_such_system.json")), sysfile_error);
    }

    SUBCASE("malformed JSON names the origin") {
        CHECK_THROWS_WITH_AS((void)parse_system("{not json", "inline-test"),
                             doctest::Contains("inline-test"), sysfile_error);
    }

    SUBCASE("missing kind is named") {
        CHECK_THROWS_WITH_AS((void)parse_system(R"({"name":"x","m":1})", "t"),
                             doctest::Contains("kind"), sysfile_error);
    }

    SUBCASE("unknown kind is named") {
        CHECK_THROWS_WITH_AS(
            (void)parse_system(R"({"name":"x","kind":"modal","m":1,"entries":[]})", "t"),
            doctest::Contains("kind"), sysfile_error);
    }

    SUBCASE("ragged entry grid is rejected") {
        const char* text = R"({"name":"x","kind":"rational","m":2,
            "entries":[[{"num":[1],"den":[1,1]}]]})";
        CHECK_THROWS_AS((void)parse_system(text, "t"), sysfile_error);
    }

    SUBCASE("improper entry is rejected") {
        const char* text = R"({"name":"x","kind":"rational","m":1,
            "entries":[[{"num":[0,0,1],"den":[1,1]}]]})";
        CHECK_THROWS_AS((void)parse_system(text, "t"), sysfile_error);
    }

    SUBCASE("non-square state matrix is rejected") {
        const char* text = R"({"name":"x","kind":"statespace",
            "A":[[1,0]],"B":[[1]],"C":[[1]],"D":[[0]]})";
        CHECK_THROWS_AS((void)parse_system(text, "t"), sysfile_error);
    }
}

TEST_CASE("format_double round-trips") {
    const double values[] = {1.0 / 3.0,      -0.0, 1e-300, 0.1, 2.0,
                             1.7976931348623157e308, 3.141592653589793};
    for (double v : values) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv round-trips exactly") {
    std::vector<CsvRow> rows;
    rows.push_back({0.0, 1.0, 1.0 / 3.0, -0.0, "upper", "cloud"});
    rows.push_back({1e-3, 0.05, -1.7320508075688772, 2.2250738585072014e-308, "lower", "cloud"});
    rows.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.5, -0.5, "upper", "eigen"});

    std::ostringstream out;
    write_csv(out, rows);
    std::istringstream in(out.str());
    const auto back = read_csv(in);

    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(back[k].omega == rows[k].omega);
        CHECK(back[k].tau == rows[k].tau);
        CHECK(back[k].re == rows[k].re);
        CHECK(back[k].im == rows[k].im);
        CHECK(back[k].branch == rows[k].branch);
        CHECK(back[k].kind == rows[k].kind);
    }

    std::ostringstream again;
    write_csv(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("csv parse errors carry line numbers") {
    std::istringstream bad_header("omega,tau\n");
    CHECK_THROWS_AS((void)read_csv(bad_header), std::runtime_error);

    std::istringstream bad_field("omega,tau,re,im,branch,kind\n1,1,x,0,upper,cloud\n");
    CHECK_THROWS_WITH_AS((void)read_csv(bad_field), doctest::Contains("2"),
                         std::runtime_error);
}

TEST_CASE("report document round-trips losslessly") {
    ReportDocument doc;
    doc.provenance.plant = "p_demo";
    doc.provenance.controller = "c_demo";
    doc.provenance.seed = 7;
    doc.provenance.samples = 150;
    doc.provenance.refine = 30;
    doc.provenance.wpoints = 40;
    doc.provenance.taupoints = 20;
    doc.provenance.wmin = 1e-2;
    doc.provenance.wmax = 1e2;
    doc.provenance.eps = 1e-6;
    doc.provenance.tol = 1e-8;
    doc.result.p1 = 2;
    doc.result.p2 = 1;
    doc.result.well_posed = true;
    doc.result.no_cancellation = true;
    doc.result.separation.holds = true;
    doc.result.separation.margin = std::numeric_limits<double>::infinity();
    doc.result.separation.worst.omega = 1.0 / 3.0;
    doc.result.separation.worst.tau = 0.55;
    doc.result.separation.worst.distance = std::numeric_limits<double>::infinity();
    doc.result.separation.worst.z1 = Complex(0.1, -0.2);
    doc.result.separation.worst.z2 = Complex(-1.0, 0.0);
    doc.result.separation.vacuous_frequencies = 42;
    doc.result.verdict = Verdict::certified;
    doc.result.claimed = 3;
    doc.result.oracle_ran = true;
    doc.result.oracle_p = 3;
    doc.result.oracle_agrees = true;
    doc.result.margin = std::numeric_limits<double>::infinity();

    const std::string once = render_report_json(doc);
    const ReportDocument back = parse_report_json(once);
    const std::string twice = render_report_json(back);
    CHECK(once == twice);

    CHECK(back.provenance.plant == "p_demo");
    CHECK(back.result.claimed == 3);
    CHECK(std::isinf(back.result.margin));
    CHECK(back.result.separation.worst.omega == doc.result.separation.worst.omega);
    CHECK(back.result.verdict == Verdict::certified);
}

TEST_CASE("feedback command certifies the reference loop") {
    TempDir dir("feedback");
    std::ostringstream out, err;
    const int rc = run_feedback(fixture("p_demo.json"), fixture("c_demo.json"),
                                quick_flags(dir.path.string()), out, err);
    CHECK(rc == kExitSuccess);
    CHECK(out.str().find("certified") != std::string::npos);
    CHECK(out.str().find("3-dominant") != std::string::npos);

    const fs::path report_path = dir.path / "p_demo_c_demo_report.json";
    REQUIRE(fs::exists(report_path));
    const auto doc = parse_report_json(slurp(report_path));
    CHECK(doc.result.verdict == Verdict::certified);
    CHECK(doc.result.claimed == 3);
    CHECK(doc.result.oracle_p == 3);
    CHECK(doc.result.oracle_agrees);
    CHECK(doc.provenance.plant == "p_demo");

    const std::string text = render_report_text(doc);
    CHECK(text.find("certified") != std::string::npos);
}

TEST_CASE("feedback exit codes") {
    SUBCASE("parse failure exits 1") {
        TempDir dir("parsefail");
        std::ostringstream out, err;
        const int rc = run_feedback(fixture("missing.json"), fixture("c_demo.json"),
                                    quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitUsage);
        CHECK_FALSE(err.str().empty());
    }

    SUBCASE("dimension mismatch exits 1") {
        TempDir dir("dimfail");
        std::ostringstream out, err;
        const int rc = run_feedback(fixture("p_demo.json"), fixture("c_negid2.json"),
                                    quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitUsage);
        CHECK(err.str().find("dimension") != std::string::npos);
    }

    SUBCASE("separation failure exits 2") {
        TempDir dir("sepfail");
        write_file(dir.path / "p_gain2.json",
                   R"({"name":"p_gain2","kind":"rational","m":1,
                       "entries":[[{"num":[2],"den":[1,1]}]]})");
        write_file(dir.path / "c_unit.json",
                   R"({"name":"c_unit","kind":"rational","m":1,
                       "entries":[[{"num":[1],"den":[1]}]]})");
        std::ostringstream out, err;
        const int rc = run_feedback((dir.path / "p_gain2.json").string(),
                                    (dir.path / "c_unit.json").string(),
                                    quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitSeparationFailed);
        CHECK(out.str().find("separation-failed") != std::string::npos);
    }

    SUBCASE("unstable cancellation exits 3 and is named") {
        TempDir dir("cancel");
        std::ostringstream out, err;
        const int rc = run_feedback(fixture("p_cancel.json"), fixture("c_cancel.json"),
                                    quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitAssumptionFailed);
        CHECK(out.str().find("cancellation") != std::string::npos);
    }
}

TEST_CASE("sg command artifacts") {
    SUBCASE("cloud and eigenvalue export is deterministic") {
        TempDir dir_a("sg_a");
        TempDir dir_b("sg_b");
        std::ostringstream out, err;
        CHECK(run_sg(fixture("g_tri2.json"), quick_flags(dir_a.path.string()), out, err) ==
              kExitSuccess);
        CHECK(run_sg(fixture("g_tri2.json"), quick_flags(dir_b.path.string()), out, err) ==
              kExitSuccess);

        const std::string csv_a = slurp(dir_a.path / "g_tri2_sg.csv");
        const std::string csv_b = slurp(dir_b.path / "g_tri2_sg.csv");
        CHECK(csv_a == csv_b);
        CHECK(slurp(dir_a.path / "g_tri2_sg.svg") == slurp(dir_b.path / "g_tri2_sg.svg"));
    }

    SUBCASE("svg is regenerated identically from the csv") {
        TempDir dir("sg_svg");
        std::ostringstream out, err;
        REQUIRE(run_sg(fixture("g_tri2.json"), quick_flags(dir.path.string()), out, err) ==
                kExitSuccess);

        std::ifstream csv_in(dir.path / "g_tri2_sg.csv");
        const auto rows = read_csv(csv_in);
        SvgConfig cfg;
        cfg.title = "g_tri2: scaled graph and eigenvalues";
        CHECK(render_svg(rows, cfg) == slurp(dir.path / "g_tri2_sg.svg"));
    }

    SUBCASE("eigenvalues stay inside the cloud band") {
        TempDir dir("sg_eig");
        std::ostringstream out, err;
        REQUIRE(run_sg(fixture("g_mimo3.json"), quick_flags(dir.path.string()), out, err) ==
                kExitSuccess);
        std::ifstream csv_in(dir.path / "g_mimo3_sg.csv");
        const auto rows = read_csv(csv_in);

        double cloud_max = 0.0;
        double eig_max = 0.0;
        int n_eigen = 0;
        for (const auto& r : rows) {
            const double mag = std::hypot(r.re, r.im);
            if (r.kind == "cloud") cloud_max = std::max(cloud_max, mag);
            if (r.kind == "eigen") {
                eig_max = std::max(eig_max, mag);
                ++n_eigen;
            }
        }
        CHECK(n_eigen > 0);
        CHECK(eig_max <= cloud_max * (1.0 + 1e-9));
    }

    SUBCASE("zero system warns and exits 0") {
        TempDir dir("sg_zero");
        std::ostringstream out, err;
        const int rc = run_sg(fixture("g_zero.json"), quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitSuccess);
        CHECK_FALSE(err.str().empty());
    }
}

TEST_CASE("principal command") {
    TempDir dir("principal");
    std::ostringstream out, err;
    const int rc = run_principal(fixture("g_tri2.json"), quick_flags(dir.path.string()),
                                 out, err);
    CHECK(rc == kExitSuccess);
    REQUIRE(fs::exists(dir.path / "g_tri2_principal.txt"));
    REQUIRE(fs::exists(dir.path / "g_tri2_principal.csv"));
    REQUIRE(fs::exists(dir.path / "g_tri2_principal.svg"));

    const std::string table = slurp(dir.path / "g_tri2_principal.txt");
    CHECK(table.find("annulus") != std::string::npos);
    CHECK(table.find("-1 inside: yes") != std::string::npos);
}

TEST_CASE("certify command") {
    TempDir dir("certify");

    SUBCASE("small gain holds for the low-gain pair") {
        std::ostringstream out, err;
        const int rc = run_certify(fixture("p_lowgain.json"), fixture("c_lowgain.json"),
                                   "gain", quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitSuccess);
        CHECK(out.str().find("small gain: holds") != std::string::npos);
    }

    SUBCASE("passivity holds for the positive real pair") {
        std::ostringstream out, err;
        const int rc = run_certify(fixture("g_lag_unstable.json"),
                                   fixture("c_negpassive.json"), "passivity",
                                   quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitSuccess);
        CHECK(out.str().find("passivity: holds") != std::string::npos);
    }

    SUBCASE("gain condition fails loudly where only the graph test wins") {
        std::ostringstream out, err;
        const int rc = run_certify(fixture("g_tri2.json"), fixture("c_negid2.json"), "gain",
                                   quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitSeparationFailed);
        CHECK(out.str().find("small gain: fails") != std::string::npos);
    }

    SUBCASE("unknown mode exits 1") {
        std::ostringstream out, err;
        const int rc = run_certify(fixture("p_demo.json"), fixture("c_demo.json"), "vibes",
                                   quick_flags(dir.path.string()), out, err);
        CHECK(rc == kExitUsage);
    }
}

TEST_CASE("oracle command prints the characteristic numerator") {
    TempDir dir("oracle");
    std::ostringstream out, err;
    const int rc = run_oracle(fixture("p_demo.json"), fixture("c_demo.json"),
                              quick_flags(dir.path.string()), out, err);
    CHECK(rc == kExitSuccess);
    CHECK(out.str().find("-6 6 -3 -2 1") != std::string::npos);
    CHECK(out.str().find("orhp zero count: 3") != std::string::npos);
}

TEST_CASE("parallel and serial sweeps agree bitwise") {
    const auto p = load_system(fixture("g_tri2.json")).system;
    const auto c = load_system(fixture("c_negid2.json")).system;
    const FeedbackLoop loop{p, c};

    SweepConfig cfg;
    cfg.omegas = SweepConfig::omega_grid(1e-2, 1e2, 30);
    cfg.taus = SweepConfig::tau_grid(12);
    cfg.cloud.samples = 120;
    cfg.cloud.refine_iters = 25;

    cfg.parallel = true;
    const auto par = sweep_separation(loop, cfg);
    cfg.parallel = false;
    const auto ser = sweep_separation(loop, cfg);

    CHECK(par.holds == ser.holds);
    CHECK(par.margin == ser.margin);
    CHECK(par.worst.omega == ser.worst.omega);
    CHECK(par.worst.tau == ser.worst.tau);
    CHECK(par.worst.z1 == ser.worst.z1);
    CHECK(par.worst.z2 == ser.worst.z2);
    CHECK(par.vacuous_frequencies == ser.vacuous_frequencies);
}
