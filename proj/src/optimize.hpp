// Exhaustive protocol search: minimize expected photons per Bell pair over
// (m, b_0..b_l) grids subject to optional fidelity, rate, and loss
// constraints. Exhaustive enumeration keeps the result exactly reproducible;
// the candidate count is capped to guard against runaway grids.
#pragma once

#include "repeater.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apqr::search {

struct int_range {
    int lo = 1;
    int hi = 1;
};

struct constraints {
    std::optional<double> min_fidelity;
    std::optional<double> min_rate_hz;
    std::optional<double> max_epsilon0;
};

struct space {
    int_range m_range;
    std::vector<int_range> branch_ranges; // one per tree level
    constraints cons;
};

struct candidate {
    int m = 0;
    std::vector<int> branches;
};

struct scored {
    candidate cand;
    model::evaluation eval;
};

struct result {
    bool found = false;
    scored best;                           // valid when found
    std::optional<scored> best_infeasible; // closest miss when nothing is feasible
    std::vector<scored> frontier;          // best feasible candidate per m
    uint64_t evaluated = 0;
    uint64_t feasible = 0;
};

// Candidate grids above this size are rejected up front.
inline constexpr uint64_t max_candidates = 100'000'000;

uint64_t candidate_count(const space& s);

// Scans the whole grid. Candidates whose effective loss reaches 0.5 are
// always discarded (the tree code cannot protect a majority of losses).
// Ties in photons per pair go to the lexicographically smallest
// (m, b_0, ..., b_l). Deterministic for any thread count.
result optimize(const space& s, const model::hardware_params& hw,
                const model::link_params& link, int threads);

struct sweep_cell {
    double l_km = 0.0;
    double l0_km = 0.0;
    std::optional<double> e_d; // per-cell override; defaults to the link value
};

struct sweep_row {
    sweep_cell cell;
    std::optional<result> res;  // present when the cell evaluated cleanly
    std::string error;          // reason when it did not
};

// Runs optimize per grid cell; rows come back in input order and a failing
// cell is reported in its row without aborting the sweep.
std::vector<sweep_row> sweep(const std::vector<sweep_cell>& cells, const space& s,
                             const model::hardware_params& hw,
                             const model::link_params& link, int threads);

} // namespace apqr::search
