#include "sgdom/analysis.hpp"
#include "sgdom/cli.hpp"
#include "sgdom/lti.hpp"
#include "sgdom/principal.hpp"
#include "sgdom/report.hpp"
#include "sgdom/sgraph.hpp"
#include "sgdom/sysfile.hpp"

#include "oracle_helpers.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sgdom;
namespace fs = std::filesystem;

fs::path g_workdir;

std::string fixture(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string find_line(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) return line;
    }
    return {};
}

std::vector<double> numbers_after(const std::string& line, const std::string& key, int count) {
    std::vector<double> out;
    const auto pos = line.find(key);
    if (pos == std::string::npos) return out;
    std::istringstream in(line.substr(pos + key.size()));
    double v = 0.0;
    while (static_cast<int>(out.size()) < count && in >> v) out.push_back(v);
    return out;
}

// Criterion 1: the reference loop P = 1/((s-1)^2(s+2)), C = (2s+2)/(s-2).
// The characteristic numerator must come out as s^4 - 2s^3 - 3s^2 + 6s - 6
// with 3 zeros in the open right half-plane, and the full dominance test
// must certify 3-dominance in agreement with the oracle.
bool criterion_reference_loop(std::ostream& why) {
    constexpr double kCoeffTol = 1e-9;
    CommonFlags flags;
    flags.out = (g_workdir / "c1").string();

    std::ostringstream out, err;
    if (run_oracle(fixture("p_demo.json"), fixture("c_demo.json"), flags, out, err) !=
        kExitSuccess) {
        why << "  oracle command failed: " << err.str();
        return false;
    }
    const std::string line = find_line(out.str(), "numerator coefficients (ascending):");
    if (line.empty()) {
        why << "  numerator line missing from oracle output:\n" << out.str();
        return false;
    }
    const std::vector<double> want = {-6.0, 6.0, -3.0, -2.0, 1.0};
    const std::vector<double> got = numbers_after(line, ":", 6);
    if (got.size() != want.size()) {
        why << "  expected " << want.size() << " coefficients, parsed " << got.size() << "\n";
        return false;
    }
    for (std::size_t k = 0; k < want.size(); ++k) {
        if (std::abs(got[k] - want[k]) > kCoeffTol) {
            why << "  coefficient " << k << " is " << got[k] << ", want " << want[k] << "\n";
            return false;
        }
    }
    if (out.str().find("orhp zero count: 3") == std::string::npos) {
        why << "  expected 3 right half-plane zeros:\n" << out.str();
        return false;
    }

    std::ostringstream fout, ferr;
    if (run_feedback(fixture("p_demo.json"), fixture("c_demo.json"), flags, fout, ferr) !=
        kExitSuccess) {
        why << "  feedback command failed: " << ferr.str() << fout.str();
        return false;
    }
    const ReportDocument doc =
        parse_report_json(slurp(fs::path(flags.out) / "p_demo_c_demo_report.json"));
    if (doc.result.verdict != Verdict::certified || doc.result.claimed != 3) {
        why << "  verdict " << to_string(doc.result.verdict) << " claimed "
            << doc.result.claimed << ", want certified 3\n";
        return false;
    }
    if (!doc.result.oracle_ran || doc.result.oracle_p != 3 || !doc.result.oracle_agrees) {
        why << "  oracle cross-check: ran=" << doc.result.oracle_ran << " p="
            << doc.result.oracle_p << "\n";
        return false;
    }
    return true;
}

// Criterion 2: the triangular 2x2 plant against C = -I must certify
// 1-dominance with a positive margin, and the principal decomposition at
// omega = 0 must report gains 1.576/0.571, phases pi/0, and an annulus
// containing -1.
bool criterion_triangular_plant(std::ostream& why) {
    constexpr double kGainTol = 0.01;
    constexpr double kPhaseTol = 1e-6;
    CommonFlags flags;
    flags.wmin = 1e-2;
    flags.wmax = 1e2;
    flags.wpoints = 80;
    flags.samples = 400;
    flags.refine = 60;
    flags.out = (g_workdir / "c2").string();

    std::ostringstream fout, ferr;
    if (run_feedback(fixture("g_tri2.json"), fixture("c_negid2.json"), flags, fout, ferr) !=
        kExitSuccess) {
        why << "  feedback command failed: " << ferr.str() << fout.str();
        return false;
    }
    const ReportDocument doc =
        parse_report_json(slurp(fs::path(flags.out) / "g_tri2_c_negid2_report.json"));
    if (doc.result.verdict != Verdict::certified || doc.result.claimed != 1) {
        why << "  verdict " << to_string(doc.result.verdict) << " claimed "
            << doc.result.claimed << ", want certified 1\n";
        return false;
    }
    if (!(doc.result.margin > 0.0)) {
        why << "  margin " << doc.result.margin << " is not positive\n";
        return false;
    }

    std::ostringstream pout, perr;
    if (run_principal(fixture("g_tri2.json"), flags, pout, perr) != kExitSuccess) {
        why << "  principal command failed: " << perr.str();
        return false;
    }
    const std::string line = find_line(pout.str(), "omega 0:");
    if (line.empty()) {
        why << "  no omega 0 row in principal table\n";
        return false;
    }
    const std::vector<double> gains = numbers_after(line, "gains", 2);
    const std::vector<double> phases = numbers_after(line, "phases", 2);
    if (gains.size() != 2 || phases.size() != 2) {
        why << "  could not parse gains/phases from: " << line << "\n";
        return false;
    }
    if (std::abs(gains[0] - 1.576) > kGainTol || std::abs(gains[1] - 0.571) > kGainTol) {
        why << "  gains " << gains[0] << ", " << gains[1] << " want 1.576, 0.571\n";
        return false;
    }
    const bool phases_ok =
        (std::abs(phases[0] - M_PI) <= kPhaseTol && std::abs(phases[1]) <= kPhaseTol) ||
        (std::abs(phases[1] - M_PI) <= kPhaseTol && std::abs(phases[0]) <= kPhaseTol);
    if (!phases_ok) {
        why << "  phases " << phases[0] << ", " << phases[1] << " want pi, 0\n";
        return false;
    }
    if (line.find("region annulus") == std::string::npos ||
        line.find("-1 inside: yes") == std::string::npos) {
        why << "  expected an annulus containing -1: " << line << "\n";
        return false;
    }
    return true;
}

// Criterion 3: G = 1/(1-s) is 1-dominant, its swept scaled graph has
// supremum gain 1 (conditional gain one, attained at omega = 0), and
// every cloud point keeps a nonnegative real part.
bool criterion_unstable_lag(std::ostream& why) {
    constexpr double kGainTol = 1e-3;
    constexpr double kReFloor = -1e-9;
    const TransferMatrix G(1, {RationalFunction{Polynomial({1.0}), Polynomial({1.0, -1.0})}});
    if (dominance_index(G) != 1) {
        why << "  dominance index " << dominance_index(G) << ", want 1\n";
        return false;
    }
    CloudConfig ccfg;
    ccfg.samples = 8;
    ccfg.refine_iters = 0;
    double sup_gain = 0.0;
    double min_re = std::numeric_limits<double>::infinity();
    for (double w : SweepConfig::omega_grid(1e-3, 1e3, 400)) {
        const SGCloud cloud = sg_cloud(G.eval(w), ccfg);
        for (const auto& pt : cloud.points) {
            sup_gain = std::max(sup_gain, pt.gain);
            min_re = std::min(min_re, pt.upper().real());
        }
    }
    if (std::abs(sup_gain - 1.0) > kGainTol) {
        why << "  sup gain " << sup_gain << ", want 1.000\n";
        return false;
    }
    if (min_re < kReFloor) {
        why << "  min Re " << min_re << " below " << kReFloor << "\n";
        return false;
    }
    return true;
}

// Criterion 4: every nonzero eigenvalue of 200 random matrices lies
// within 1e-8 of its sampled cloud.
bool criterion_eigenvalue_containment(std::ostream& why) {
    constexpr double kTol = 1e-8;
    CloudConfig ccfg;
    ccfg.samples = 64;
    ccfg.refine_iters = 0;
    int failures = 0;
    for (int k = 0; k < 200; ++k) {
        const int m = 2 + k % 5;
        const Eigen::MatrixXcd A =
            testing::random_matrix(4100, static_cast<std::uint64_t>(k), m);
        if (!eig_containment(A, ccfg, kTol)) {
            ++failures;
            why << "  containment failed for matrix " << k << " (dim " << m << ")\n";
        }
    }
    return failures == 0;
}

// Criterion 5: whenever the refined clouds of A and the inverse of B are
// separated by more than 0.05, det(I - AB) is nonzero.
bool criterion_separation_determinant(std::ostream& why) {
    constexpr double kSeparation = 0.05;
    constexpr double kDetFloor = 1e-12;
    constexpr int kWanted = 500;
    int accepted = 0;
    std::uint64_t k = 0;
    for (int trial = 0; trial < 20000 && accepted < kWanted; ++trial, ++k) {
        const int m = 2 + static_cast<int>(k % 3);
        const Eigen::MatrixXcd A = 0.5 * testing::random_matrix(5200, 2 * k, m);
        const Eigen::MatrixXcd B = testing::random_matrix(5200, 2 * k + 1, m);
        CloudConfig ca;
        ca.samples = 200;
        ca.refine_iters = 30;
        ca.stream = 2 * k;
        CloudConfig cb = ca;
        cb.stream = 2 * k + 1;
        const SGCloud cloud_a = sg_cloud(A, ca);
        const SGCloud cloud_b = sg_inverse_cloud(B, cb);
        if (cloud_a.empty() || cloud_b.empty()) continue;
        if (sg_distance(cloud_a, cloud_b, 40).distance <= kSeparation) continue;
        ++accepted;
        const double det =
            std::abs((Eigen::MatrixXcd::Identity(m, m) - A * B).determinant());
        if (det <= kDetFloor) {
            why << "  separated pair " << k << " (dim " << m << ") has |det(I-AB)| = " << det
                << "\n";
            return false;
        }
    }
    if (accepted < kWanted) {
        why << "  only " << accepted << " separated pairs found\n";
        return false;
    }
    return true;
}

// Criterion 6: for scalar systems the cloud is exactly the conjugate
// pair {G(jw), conj(G(jw))}.
bool criterion_scalar_clouds(std::ostream& why) {
    constexpr double kTol = 1e-12;
    const CounterRng rng(6100, 0);
    std::uint64_t ctr = 0;
    const std::vector<double> omegas = SweepConfig::omega_grid(1e-2, 1e2, 48);
    CloudConfig ccfg;
    ccfg.samples = 1;
    ccfg.refine_iters = 0;
    int checked = 0;
    int skipped = 0;
    for (int s = 0; s < 50; ++s) {
        const TransferMatrix G(1, {testing::random_rational(rng, ctr, 2, true, false)});
        for (double w : omegas) {
            const Eigen::MatrixXcd M = G.eval(w);
            const SGCloud cloud = sg_cloud(M, ccfg);
            if (cloud.zero_matrix) {
                ++skipped;
                continue;
            }
            if (cloud.points.size() != 1) {
                why << "  scalar cloud with " << cloud.points.size() << " points\n";
                return false;
            }
            const Complex z = M(0, 0);
            const Complex up = cloud.points[0].upper();
            const Complex lo = cloud.points[0].lower();
            const double tol = kTol * std::max(1.0, std::abs(z));
            const bool direct = std::abs(up - z) <= tol && std::abs(lo - std::conj(z)) <= tol;
            const bool flipped = std::abs(up - std::conj(z)) <= tol && std::abs(lo - z) <= tol;
            if (!direct && !flipped) {
                why << "  system " << s << " at omega " << w << ": cloud (" << up << ", " << lo
                    << ") vs response " << z << "\n";
                return false;
            }
            ++checked;
        }
    }
    if (checked < 2400) {
        why << "  only " << checked << " probes checked (" << skipped << " zero responses)\n";
        return false;
    }
    return true;
}

// Criterion 7: the scaled graph is invariant under unitary similarity,
// and scaling the matrix by tau scales every cloud point by tau at the
// same witness.
bool criterion_invariance(std::ostream& why) {
    constexpr double kScaleTol = 1e-12;
    for (int k = 0; k < 30; ++k) {
        const int m = 2 + k % 4;
        const Eigen::MatrixXcd A =
            testing::random_matrix(7300, static_cast<std::uint64_t>(k), m);
        const Eigen::MatrixXcd U =
            testing::random_unitary(7400, static_cast<std::uint64_t>(k), m);
        if (!unitary_invariance_check(A, U)) {
            why << "  unitary invariance failed for matrix " << k << " (dim " << m << ")\n";
            return false;
        }
    }
    for (int k = 0; k < 30; ++k) {
        const int m = 2 + k % 3;
        const Eigen::MatrixXcd A =
            testing::random_matrix(7500, static_cast<std::uint64_t>(k), m);
        const CounterRng tr(7600, static_cast<std::uint64_t>(k));
        const double tau = 0.05 + 0.9 * tr.uniform(0);
        const Eigen::MatrixXcd As = tau * A;
        CloudConfig ccfg;
        ccfg.samples = 200;
        ccfg.refine_iters = 40;
        ccfg.stream = static_cast<std::uint64_t>(k);
        for (const auto& pt : sg_cloud(As, ccfg).points) {
            const auto ref = sg_point(A, pt.witness);
            if (!ref) {
                why << "  scaled witness lost for matrix " << k << "\n";
                return false;
            }
            const Complex want = tau * ref->upper();
            if (std::abs(pt.upper() - want) > kScaleTol * std::max(1.0, std::abs(want))) {
                why << "  matrix " << k << " tau " << tau << ": point " << pt.upper()
                    << " vs scaled " << want << "\n";
                return false;
            }
        }
    }
    return true;
}

// Criterion 8: across randomized loops with the feedback assumptions
// enforced by construction, every certified verdict agrees with the
// exact pole-count oracle.
bool criterion_oracle_soundness(std::ostream& why) {
    SweepConfig cfg;
    cfg.omegas = SweepConfig::omega_grid(1e-2, 1e2, 240);
    cfg.taus = SweepConfig::tau_grid(20);
    cfg.cloud.samples = 220;
    cfg.cloud.refine_iters = 30;
    cfg.eps = 0.05;
    cfg.tol = 1e-8;

    const CounterRng rng(8200, 0);
    std::uint64_t ctr = 0;
    int accepted = 0;
    int certified = 0;
    for (int attempt = 0; attempt < 1000 && accepted < 100; ++attempt) {
        const int m = 1 + static_cast<int>(rng.uniform(ctr++) * 3.0) % 3;
        const TransferMatrix P = testing::random_system(rng, ctr, m, 2, false);
        const TransferMatrix C = testing::random_system(rng, ctr, m, 1, false);
        const FeedbackLoop loop{P, C};
        if (!well_posed(loop) || !cancellation_check(loop, cfg.tol)) continue;
        ++accepted;
        try {
            const DominanceReport rep = dominance_theorem(loop, cfg);
            if (rep.verdict == Verdict::certified) {
                ++certified;
                if (!rep.oracle_ran || !rep.oracle_agrees) {
                    why << "  loop " << accepted << ": certified without oracle agreement\n";
                    return false;
                }
            }
        } catch (const oracle_mismatch_error& e) {
            why << "  loop " << accepted << ": " << e.what() << "\n";
            return false;
        }
    }
    if (accepted < 100) {
        why << "  only " << accepted << " loops accepted\n";
        return false;
    }
    if (certified == 0) {
        why << "  campaign certified nothing; sweep budgets are too weak\n";
        return false;
    }
    return true;
}

// Criterion 9: pairs scaled to satisfy the small-gain condition always
// pass the separation sweep, and the small-phase and passivity fixtures
// hold.
bool criterion_corollaries(std::ostream& why) {
    SweepConfig cfg;
    cfg.omegas = SweepConfig::omega_grid(1e-2, 1e2, 25);
    cfg.taus = SweepConfig::tau_grid(20);
    cfg.cloud.samples = 100;
    cfg.cloud.refine_iters = 20;

    const CounterRng rng(9100, 0);
    std::uint64_t ctr = 0;
    int done = 0;
    for (int attempt = 0; attempt < 400 && done < 30; ++attempt) {
        const int m = 1 + static_cast<int>(rng.uniform(ctr++) * 2.0) % 2;
        const TransferMatrix P = testing::random_system(rng, ctr, m, 2, true);
        const TransferMatrix C = testing::random_system(rng, ctr, m, 1, true);
        double worst = 0.0;
        for (double w : cfg.omegas) {
            worst = std::max(worst, sg_stats(P.eval(w), 0).sigma_max *
                                        sg_stats(C.eval(w), 0).sigma_max);
        }
        if (!(worst > 0.0)) continue;
        const FeedbackLoop loop{P.scaled(0.9 / worst), C};
        ++done;
        const CorollaryReport rep = corollary_checks(loop, cfg);
        if (!rep.small_gain) {
            why << "  pair " << done << ": scaled gain product " << rep.worst_gain_product
                << " fails the small-gain condition\n";
            return false;
        }
        if (!sweep_separation(loop, cfg).holds) {
            why << "  pair " << done << ": small gain holds but the sweep fails\n";
            return false;
        }
    }
    if (done < 30) {
        why << "  only " << done << " pairs built\n";
        return false;
    }

    const TransferMatrix P_phase(1, {RationalFunction{Polynomial({1.0}), Polynomial({1.0, 1.0})}});
    const TransferMatrix C_phase(1,
                                 {RationalFunction{Polynomial({-0.5}), Polynomial({2.0, 1.0})}});
    const CorollaryReport phase_rep = corollary_checks({P_phase, C_phase}, cfg);
    if (!phase_rep.small_phase || !(phase_rep.worst_phase_sum < M_PI)) {
        why << "  small-phase fixture fails: worst sum " << phase_rep.worst_phase_sum << "\n";
        return false;
    }

    const TransferMatrix P_pass(1, {RationalFunction{Polynomial({1.0}), Polynomial({1.0, -1.0})}});
    const TransferMatrix C_pass(1,
                                {RationalFunction{Polynomial({-1.0}), Polynomial({1.0, 1.0})}});
    const CorollaryReport pass_rep = corollary_checks({P_pass, C_pass}, cfg);
    if (!pass_rep.passivity || pass_rep.worst_p_herm_min < 0.0 ||
        !(pass_rep.worst_c_herm_max < 0.0)) {
        why << "  passivity fixture fails: plant Hermitian minimum " << pass_rep.worst_p_herm_min
            << ", controller Hermitian maximum " << pass_rep.worst_c_herm_max << "\n";
        return false;
    }
    return true;
}

struct Criterion {
    std::string label;
    std::function<bool(std::ostream&)> body;
};

}  // namespace

int main() {
    g_workdir = fs::temp_directory_path() /
                ("sgdom_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(g_workdir);
    fs::create_directories(g_workdir);

    const std::vector<Criterion> criteria = {
        {"reference loop: oracle numerator and certified 3-dominance", criterion_reference_loop},
        {"triangular plant: certified 1-dominance and principal annulus",
         criterion_triangular_plant},
        {"unstable lag: conditional gain one and nonnegative real part", criterion_unstable_lag},
        {"eigenvalue containment in sampled clouds (200 matrices)",
         criterion_eigenvalue_containment},
        {"cloud separation implies nonsingular I - AB (500 pairs)",
         criterion_separation_determinant},
        {"scalar clouds equal the conjugate response pair (50x50 probes)",
         criterion_scalar_clouds},
        {"unitary similarity and tau scaling invariance (30 + 30 matrices)",
         criterion_invariance},
        {"certified verdicts match the pole-count oracle (100 loops)",
         criterion_oracle_soundness},
        {"small-gain pairs pass the sweep; phase and passivity fixtures hold",
         criterion_corollaries},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::ostringstream why;
        bool ok = false;
        try {
            ok = criteria[i].body(why);
        } catch (const std::exception& e) {
            why << "  unexpected exception: " << e.what() << "\n";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].label << " ("
                  << std::fixed << std::setprecision(1) << secs << " s)\n"
                  << std::defaultfloat;
        if (!ok) {
            std::cout << why.str();
            ++failures;
        }
    }
    std::cout << "acceptance: " << (criteria.size() - static_cast<std::size_t>(failures)) << "/"
              << criteria.size() << " criteria passed\n";

    fs::remove_all(g_workdir);
    return failures;
}
