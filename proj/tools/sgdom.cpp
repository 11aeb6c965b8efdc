#include "sgdom/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_common_flags(CLI::App* cmd, sgdom::CommonFlags& flags) {
    cmd->add_option("--wmin", flags.wmin, "Smallest interior frequency of the log grid [rad/s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--wmax", flags.wmax, "Largest interior frequency of the log grid [rad/s]")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--wpoints", flags.wpoints,
                    "Interior frequency count; 0 and infinity are always added")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--taupoints", flags.taupoints, "Number of tau scaling points on (0, 1]")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
    cmd->add_option("--samples", flags.samples, "Random cloud samples per frequency")
        ->check(CLI::Range(1, 10000000))
        ->capture_default_str();
    cmd->add_option("--refine", flags.refine,
                    "Boundary refinement iterations per cloud; 0 disables refinement")
        ->check(CLI::Range(0, 1000000))
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "Seed for the keyed sampling generator")
        ->capture_default_str();
    cmd->add_option("--eps", flags.eps, "Separation threshold for certification")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--tol", flags.tol, "Numerical tolerance for pole clustering")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", flags.out, "Directory for CSV/SVG/report artifacts")
        ->capture_default_str();
    cmd->add_flag("--no-oracle", flags.no_oracle, "Skip the exact closed-loop pole-count oracle");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Graphical dominance analysis of MIMO feedback loops via frequency-wise scaled "
        "graphs.\n"
        "System files are JSON; rational entries list coefficients ascending by power,\n"
        "so num = [0, 1] means s and den = [1, 0, 1] means 1 + s^2.\n"
        "Exit codes: 0 success/certified, 1 usage or parse error, 2 separation failed,\n"
        "3 assumption failed."};
    app.require_subcommand(1);

    sgdom::CommonFlags flags;
    std::string p_path, c_path, sys_path, mode;

    CLI::App* sg = app.add_subcommand("sg", "Sweep one system's scaled graph to CSV and SVG");
    sg->add_option("system", sys_path, "System file (JSON)")->required();
    add_common_flags(sg, flags);

    CLI::App* feedback =
        app.add_subcommand("feedback", "Certify closed-loop dominance of a plant/controller pair");
    feedback->add_option("plant", p_path, "Plant system file")->required();
    feedback->add_option("controller", c_path, "Controller system file")->required();
    add_common_flags(feedback, flags);

    CLI::App* principal =
        app.add_subcommand("principal", "Per-frequency principal gains, phases and regions");
    principal->add_option("system", sys_path, "System file (JSON)")->required();
    add_common_flags(principal, flags);

    CLI::App* certify =
        app.add_subcommand("certify", "Check a sufficient condition: gain, phase or passivity");
    certify->add_option("plant", p_path, "Plant system file")->required();
    certify->add_option("controller", c_path, "Controller system file")->required();
    certify->add_option("mode", mode, "Condition to check")
        ->required()
        ->check(CLI::IsMember({"gain", "phase", "passivity"}));
    add_common_flags(certify, flags);

    CLI::App* oracle = app.add_subcommand(
        "oracle", "Exact closed-loop characteristic polynomial and ORHP zero count");
    oracle->add_option("plant", p_path, "Plant system file")->required();
    oracle->add_option("controller", c_path, "Controller system file")->required();
    add_common_flags(oracle, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? sgdom::kExitSuccess : sgdom::kExitUsage;
    }

    if (sg->parsed()) return sgdom::run_sg(sys_path, flags, std::cout, std::cerr);
    if (feedback->parsed()) return sgdom::run_feedback(p_path, c_path, flags, std::cout, std::cerr);
    if (principal->parsed()) return sgdom::run_principal(sys_path, flags, std::cout, std::cerr);
    if (certify->parsed()) {
        return sgdom::run_certify(p_path, c_path, mode, flags, std::cout, std::cerr);
    }
    if (oracle->parsed()) return sgdom::run_oracle(p_path, c_path, flags, std::cout, std::cerr);
    return sgdom::kExitUsage;
}
