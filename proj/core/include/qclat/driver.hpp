#pragma once

#include <string>
#include <vector>

#include "qclat/comb_io.hpp"

namespace qclat {

/// Configuration shared by every subcommand; a fixed seed makes report bytes
/// reproducible.
struct RunConfig {
    std::string subcommand;
    std::string input_path;
    std::string output_path;
    double window = 20.0;
    double tol = 1e-8;
    std::vector<double> sigma_ladder = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> theta_grid;  // empty: default 16 directions
    std::vector<double> eps_ladder;  // empty: 1e-1 .. 1e-4
    double alpha = -1.0;
    long disc = 2;
    unsigned long seed = 1;
    size_t cap = 1'000'000;
    int probes = 16;
    std::string format = "text";  // "text" or "json"
    std::vector<std::string> args;
};

struct RunResult {
    int exit_code = 0;                 // 0 iff every check passed
    std::string text_report;
    json report;                       // machine-readable twin
};

/// Subcommands: fourier, verify, oracle, discreteness, diffs, dio, periods,
/// reconstruct, refute, counterexample, equal.
RunResult run(const RunConfig& config);

/// Probe panel used by `verify` and `counterexample`: sigma cycles through
/// {0.5, 1, 2}, centers and modulations uniform in [-2, 2]^p, seeded.
std::vector<struct GaussianProbe> probe_panel(int count, int dim, unsigned long seed);

} // namespace qclat
