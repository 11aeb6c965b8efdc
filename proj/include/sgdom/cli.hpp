#ifndef SGDOM_CLI_HPP
#define SGDOM_CLI_HPP

#include "sgdom/analysis.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace sgdom {

/// Exit codes shared by all subcommands.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSeparationFailed = 2;
inline constexpr int kExitAssumptionFailed = 3;

/// Sweep and budget flags common to every subcommand; the defaults here
/// are the single source of the tool's default grids.
struct CommonFlags {
    double wmin = 1e-3;
    double wmax = 1e3;
    int wpoints = 400;
    int taupoints = 20;
    int samples = 2000;
    int refine = 200;
    std::uint64_t seed = 0;
    double eps = 1e-6;
    double tol = 1e-8;
    std::string out = ".";
    bool no_oracle = false;
};

SweepConfig make_sweep_config(const CommonFlags& flags);

/// Sweeps the scaled graph of one system over the frequency grid and
/// writes <name>_sg.csv and <name>_sg.svg with cloud points and
/// eigenvalue markers. A system with identically zero response exits
/// with code 0 and a warning.
int run_sg(const std::string& system_path, const CommonFlags& flags, std::ostream& out,
           std::ostream& err);

/// Runs the full graphical dominance test on a plant/controller pair,
/// prints the text report and writes the structured report next to it.
int run_feedback(const std::string& p_path, const std::string& c_path, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err);

/// Per-frequency principal gains, phases and bounding regions, with CSV
/// and SVG artifacts of the region outlines and eigenvalues.
int run_principal(const std::string& system_path, const CommonFlags& flags, std::ostream& out,
                  std::ostream& err);

/// Checks one of the sufficient conditions (gain, phase, passivity) on
/// the grid and prints the worst value and its binding frequency.
int run_certify(const std::string& p_path, const std::string& c_path, const std::string& mode,
                const CommonFlags& flags, std::ostream& out, std::ostream& err);

/// Prints the characteristic numerator det(I - PC) and the exact ORHP
/// zero count.
int run_oracle(const std::string& p_path, const std::string& c_path, const CommonFlags& flags,
               std::ostream& out, std::ostream& err);

}  // namespace sgdom

#endif  // SGDOM_CLI_HPP
