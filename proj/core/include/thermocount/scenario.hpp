#pragma once

#include <array>
#include <string>
#include <vector>

#include "thermocount/counting.hpp"
#include "thermocount/saddle.hpp"
#include "thermocount/truncation.hpp"

// Scenario orchestration: a structured config document describing a shift, a
// potential pair (or truncation family), a task, and its parameters; runs the
// task and emits plot-ready CSV plus a machine-readable summary.  Every output
// embeds the fully resolved config in its '#' header block.

namespace tc {

struct Scenario {
    std::string name = "unnamed";
    // pressure-grid | manhattan | correlation | bishop-steger | count |
    // verify | saddle | truncation-study
    std::string task = "verify";

    Shift shift;
    bool has_pair = false;
    PotentialPair pair;

    bool has_family = false;
    TruncationFamily family;

    // task parameters (defaults are the resolved values)
    bool m_star = true;   // window slope: the rigidity slope delta_f/delta_g
    double m = 0;         // used when m_star is false
    double xi = 0.5;
    double t_min = 12.0, t_max = 24.0, t_step = 0.5;
    double epsilon = 0.2;
    int n_samples = 161;
    long long budget = 5'000'000'000LL;
    Cylinder tracked{{0}};
    std::vector<double> slopes;                      // correlation
    std::vector<std::array<double, 2>> ab_list{{1.0, 1.0}, {2.0, 1.0}}; // bishop-steger
    std::vector<double> saddle_n{64, 256, 1024};
    std::vector<std::string> saddle_cases{"gaussian", "quartic"};
    std::vector<int> N_list{8, 16, 32, 64};          // truncation-study
    std::vector<std::array<double, 2>> z_grid;       // pressure-grid (empty = default 5x5)
};

struct ScenarioOverrides {
    std::string out_dir = ".";
    int threads = 1;
    long long budget = -1; // -1 = keep the scenario's
    unsigned long long seed = 12345;
};

// Parse a scenario document (JSON).  Throws ConfigError naming the offending
// field; referenced files are checked for existence.
Scenario load_scenario(const std::string& path);

// The fully resolved config (all defaults explicit), one JSON document.
std::string resolved_config_json(const Scenario& sc);

// Runs the task and writes its artifacts into overrides.out_dir.
// Exit status: 0 ok, 1 verify-assertion failures, 2 budget truncation.
int run_scenario(const Scenario& sc, const ScenarioOverrides& ov);

// the verify task's row type, exposed for tests
struct VerifyRow {
    std::string check;
    bool pass = false;
    double measured = 0;
    double tolerance = 0;
};

std::vector<VerifyRow> verify_suite(const Scenario& sc, unsigned long long seed);

} // namespace tc
