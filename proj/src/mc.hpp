// Monte Carlo cross-validation of the closed-form analytics.
//
// The tree sampler draws per-photon losses and per-measurement flips and
// replays the readout strategy (majority-voted indirect measurement whenever
// the subtree delivers one, the direct photon as fallback). The repeater
// sampler replays a full trial of the chain and accumulates a Pauli frame
// for the delivered pair. Trials use counter-based substreams, so results
// are bit-identical for a given seed regardless of thread count.
#pragma once

#include "repeater.hpp"
#include "tree.hpp"

#include <cstdint>

namespace apqr::mc {

struct settings {
    uint64_t trials = 100000;
    uint64_t seed = 1;
    double confidence_sigma = 3.0;
    int threads = 0; // 0 = one per hardware thread
};

struct estimate {
    double mean = 0.0;
    double std_error = 0.0;
    uint64_t trials = 0; // sample count behind the mean
    uint64_t count = 0;  // raw tally
};

enum class basis { z, x };

struct tree_result {
    estimate success;
    estimate error_given_success;
};

// Samples logical tree measurements at physical level: every photon is lost
// independently with probability epsilon0 and every measurement outcome
// flips with probability e_m.
tree_result sample_tree_measurement(const tree::tree_params& t, double epsilon0,
                                    double e_m, basis b, const settings& st);

// Analytic per-trial inputs for the repeater sampler.
struct repeater_inputs {
    int m = 1;
    long long n = 1;
    double p_b = 0.0;
    double one_minus_p_z = 0.0;
    double one_minus_p_x = 0.0;
    double e_z_bar = 0.0;
    double e_x_bar = 0.0;
    double e_m = 0.0;
};

repeater_inputs inputs_from(const model::evaluation& ev, int m);

struct repeater_result {
    estimate p;
    estimate e_x, e_y, e_z; // conditional on trial success
};

// Per-trial chain replay: every station must connect an arm pair, every
// logical tree measurement must succeed, and measurement errors accumulate
// into the delivered pair's Pauli frame.
repeater_result sample_repeater(const repeater_inputs& in, const settings& st);

// Same replay, but the logical tree measurements are sampled photon by
// photon instead of using their analytic success/error rates.
repeater_result sample_repeater_physical(const model::config& cfg, const settings& st);

enum class verdict { consistent, inconsistent };

// Consistency of an analytic value with a Monte Carlo estimate: within
// sigma standard errors, or exactly equal when the estimate has zero
// variance.
verdict compare(double analytic, const estimate& est, double sigma);

} // namespace apqr::mc
