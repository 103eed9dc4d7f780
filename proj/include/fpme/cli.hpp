#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpme/density.hpp"
#include "fpme/evolve.hpp"
#include "fpme/grid.hpp"
#include "fpme/initial_data.hpp"

namespace fpme {

// What a scenario asks the laboratory to do; the kind selects the solver
// entry point and the checks that run over the result.
enum class ExperimentKind {
    single_run,        // one box solve with the always-on checks
    exhaustion,        // nested boxes, monotonicity toward the minimal solution
    contraction_pair,  // two data on one box, weighted L1 ordering
    mass_experiment,   // weighted mass drift per box radius
    nonuniqueness,     // constant datum vs minimal solution, flux decay
    smoothing,         // sup-norm decay rate from concentrated data
    potential_decay,   // density potential far-field law, no PDE
    operator_validation  // eigenfunctions, cutoff scaling and tail, no PDE
};

const char* to_string(ExperimentKind k);

// A fully resolved experiment description. Every field has a default, so
// the empty document is a valid scenario; parse_scenario fills the rest.
struct Scenario {
    std::string name = "run";
    ExperimentKind kind = ExperimentKind::single_run;
    int N = 1;
    PhysParams params;        // sigma = 1, m = 1
    DensityProfile density;   // constant 1
    InitialDatum datum;       // constant 1, uncapped
    InitialDatum datum2;      // second datum, contraction_pair only
    double h = 0.25;          // target spacing; the realized one is derived
    std::vector<double> radii{10.0};
    StepperConfig stepper;
    double T = 0.25;
    SamplePolicy sampling;
    double tau = 0.0;     // start of flux accumulation (nonuniqueness)
    double fit_lo = 0.01; // smoothing fit window; fit_hi = 0 means "up to T"
    double fit_hi = 0.0;
    std::string out;      // output root; empty defers to FPME_OUT, then "out"
};

// Carries every constraint violation found in one parsing pass, so a bad
// document reports all its problems at once instead of the first.
class ScenarioError : public std::invalid_argument {
  public:
    explicit ScenarioError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

// Strict key-value parser: '#' comments and blank lines are skipped, every
// other line must read "key = value", unknown and duplicate keys are errors.
Scenario parse_scenario(const std::string& text);

// Inverse of parse_scenario: every key explicit, fixed order, round-trip
// exact (doubles at 17 significant digits).
std::string serialize_scenario(const Scenario& s);

// Box grid realized for one radius: node count is derived from the target
// spacing and forced odd so the origin is a node.
Grid scenario_grid(const Scenario& s, double radius);

struct RunOptions {
    std::filesystem::path out_root;  // overrides scenario `out` and FPME_OUT
    bool force = false;              // replace an existing run directory
    int jobs = 1;                    // cap on worker threads
};

struct RunResult {
    int status = 0;  // 0 all gating checks pass, 1 some failed, 2 aborted
    std::filesystem::path dir;  // run directory (when it was created)
    std::string message;        // human-readable failure context
};

// Execute a scenario and write its artifacts under <root>/<name>: a manifest
// that is itself a valid scenario document, per-sample field checkpoints,
// per-step CSV trails, one key-value file per check, and the check summary.
RunResult run_scenario(const Scenario& s, const RunOptions& opt = {});

// `fpme run|validate|report`; returns the process exit status.
int cli_main(int argc, char** argv);

}  // namespace fpme
