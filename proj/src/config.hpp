#pragma once

// JSON configuration schema shared by the CLI and the C API. Parsing is
// strict: unknown keys are rejected and every diagnostic carries a dotted
// field path. Value validation that does not depend on the command happens
// here; command-specific section requirements are enforced by the runner.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mc.hpp"
#include "optimize.hpp"
#include "prep.hpp"
#include "repeater.hpp"

namespace apqr::cfg {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct mc_tree_case {
    tree::tree_params tree;
    double epsilon0 = 0.0;
    double e_m = 0.0;
    mc::basis basis = mc::basis::z;
    std::optional<uint64_t> trials; // per-case override
    std::optional<double> expected_success;
    std::optional<double> expected_error;
};

struct mc_section {
    uint64_t trials = 100000;
    uint64_t seed = 1;
    double confidence_sigma = 3.0;
    std::vector<mc_tree_case> tree_suite;
    bool repeater = false;        // validate the end-to-end pair statistics
    uint64_t physical_trials = 0; // >0 samples every tree photon as well
};

struct output_options {
    std::string format = "json"; // json | csv
    std::string path;            // empty = stdout
};

struct search_section {
    search::space space;
    std::vector<search::sweep_cell> grid; // sweep cells, row order preserved
};

struct run_config {
    std::optional<model::hardware_params> hardware;
    std::optional<model::link_params> link;
    std::optional<model::protocol_params> protocol;
    prep::polynomial prep_poly; // protocol.prep_poly, identity when absent
    std::optional<search_section> search;
    std::optional<mc_section> mc;
    output_options output;
};

// Throws config_error with a dotted field path on any schema violation.
run_config parse(const std::string& json_text);

struct overrides {
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> format;
};

// Accepts null/empty input; unknown keys are rejected like in parse().
overrides parse_overrides(const std::string& json_text);

} // namespace apqr::cfg
