#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanglesim/arrival.hpp"

namespace tanglesim {

// Resolved configuration for one CLI invocation. Defaults here are the
// documented defaults of the tool; a scenario file and command-line flags
// override them (flags win over the file).
struct ScenarioConfig {
    SimConfig sim;

    std::size_t runs = 100;
    std::size_t walks = 100000;
    std::size_t samples = 100000;
    std::size_t jobs = 0;  // 0 = all available cores
    std::size_t reps = 1;  // bench repetitions per size
    std::string output_dir = "out";

    // attack
    std::string attack_kind = "tip_flood";  // tip_flood | cut_set_chain
    std::size_t attacker_size = 0;
    double kappa = 0.6;
    std::uint64_t anchor = 0;

    // sweeps
    std::vector<double> lambdas;
    std::vector<std::uint64_t> tx_counts;

    // metrics extras
    std::size_t track_cw = 1;
    double orphan_horizon = 20.0;
};

// Subcommand drivers. Each validates its full configuration before
// touching the filesystem, then writes its CSV outputs plus a
// config_used.txt echo into output_dir. Returns a process exit code.
int cmd_simulate(const ScenarioConfig& cfg);
int cmd_batch(const ScenarioConfig& cfg);
int cmd_scaling(const ScenarioConfig& cfg);
int cmd_exitprofile(const ScenarioConfig& cfg);
int cmd_attack(const ScenarioConfig& cfg);
int cmd_bench(const ScenarioConfig& cfg);

}  // namespace tanglesim
