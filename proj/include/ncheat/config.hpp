#ifndef NCHEAT_CONFIG_HPP
#define NCHEAT_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ncheat/kernel.hpp"
#include "ncheat/solver.hpp"

namespace ncheat {

class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMode { Simulate, KernelCheck };
enum class InitialKind { Analytic, Sine, Custom };

/// A full run description, parsed from a flat key=value file with
/// [bracketed] section headers.
struct RunConfig {
    RunMode mode = RunMode::Simulate;

    BoundaryCurve curve = BoundaryCurve::power_law(1.0, 1.0);
    SchemeConfig scheme;

    bool controller_enabled = false;
    KernelParams kernel;

    InitialKind initial = InitialKind::Analytic;
    std::string initial_file;

    std::string trace_path = "trace.csv";
    std::string summary_path = "summary.txt";
    int sample_count = 200;

    void validate() const;  // throws config_error before any compute
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
std::string serialize_config(const RunConfig& config);

/// Named configurations reproducing the headline experiments:
/// "thm11", "thm12", "closedloop", "kernelcheck".
RunConfig preset(const std::string& name);

/// Executes the configured run and writes the trace CSV and the key=value
/// fit summary.  Identical configs produce byte-identical outputs.
void run_scenario(const RunConfig& config);

struct SweepGrid {
    std::vector<double> alpha;   // empty list = keep the base value
    std::vector<double> k;
    std::vector<double> lambda;
};

/// Parses "alpha=0.25,0.5,1;k=1;lambda=0.5,2.5,6.5".
SweepGrid parse_grid_spec(const std::string& spec);

/// One row per combination, in lexicographic grid order (alpha, then k,
/// then lambda); combinations run concurrently but rows are written by a
/// single writer in order.  Caps the grid at 10^4 combinations.
void sweep(const RunConfig& base, const SweepGrid& grid, const std::string& out_path);

} // namespace ncheat

#endif
