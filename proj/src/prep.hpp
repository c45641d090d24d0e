// Resource estimates for preparing the repeater graph states from heralded
// GHZ sources and probabilistic fusion gates, assuming feed-forward steps of
// duration tau_a and on-chip loss P_tau_a per step.
#pragma once

#include "tree.hpp"

#include <vector>

namespace apqr::prep {

struct source_params {
    double eta_s = 1.0; // source efficiency
    double eta_d = 1.0; // detector efficiency
};

void validate(const source_params& p);

// Polynomial with ascending coefficients; models the per-fusion retry
// overhead poly(x) used in the photon-count bounds.
struct polynomial {
    std::vector<double> coeffs{0.0, 1.0}; // identity by default

    double eval(double x) const;
    static polynomial identity() { return polynomial{}; }
};

// Time to build one star-shaped state with 2m arms carrying the given tree
// encoding, in units of seconds (tau_a is the feed-forward step time).
double prep_time_star(int m, const tree::tree_params& t, double tau_a);

// The complete-like state needs one extra feed-forward step.
double prep_time_complete(double tau_s, double tau_a);

struct ghz_stats {
    double success;        // heralded success probability of one GHZ attempt
    double effective_loss; // loss already carried by a heralded photon
};

// Linear-optics GHZ factory fed with single photons of efficiency
// eta_s, detected with efficiency eta_d.
ghz_stats ghz_source_stats(const source_params& p);

struct fusion_bounds {
    double lower; // includes p_tau_a decay over the given number of steps
    double upper; // lossless-switching limit
};

// Success probability window of a boosted two-photon fusion.
fusion_bounds fusion_success_bounds(const source_params& p, double p_tau_a,
                                    double steps);

// Expected number of single photons consumed per star-shaped state.
double star_state_photon_bound(int m, const tree::tree_params& t,
                               const source_params& p, double p2,
                               const polynomial& poly);

// Expected number of single photons per complete-like state, given the star
// cost q_s; the extra factor accounts for re-encoding each of the 4m+2
// boundary qubits through a lossy step sequence.
double complete_state_photon_bound(double q_s, int m, const source_params& p,
                                   double p_tau_a, double steps);

struct prep_estimate {
    double tau_s = 0;
    double tau_c = 0;
    double ghz_success = 0;
    double ghz_effective_loss = 0;
    double p2_lower = 0;
    double p2_upper = 0;
    double q_s_bound = 0;
    double q_c_bound = 0;
};

// Full pipeline for one node's state, using the conservative (lower) fusion
// success probability for the photon bounds.
prep_estimate estimate(int m, const tree::tree_params& t, const source_params& p,
                       double tau_a, double p_tau_a, const polynomial& poly);

} // namespace apqr::prep
