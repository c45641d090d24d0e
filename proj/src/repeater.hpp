// End-to-end performance model of a memoryless repeater chain built from
// complete-like graph states with tree-encoded arms.
//
// A link of length l_km is cut into segments of l0_km; the n interior source
// nodes each emit 2m tree-encoded arms towards their neighbouring receiver
// stations, which perform linear-optics Bell measurements. A trial succeeds
// when every station connects at least one arm pair and all logical tree
// measurements succeed; successful trials leave Alice and Bob with a Bell
// pair whose residual Pauli error rates follow from the measurement errors.
#pragma once

#include "tree.hpp"

namespace apqr::model {

struct hardware_params {
    double eta_s = 1.0;           // source efficiency
    double eta_d = 1.0;           // detector efficiency
    double tau_a = 0.0;           // feed-forward step time, seconds
    double source_rate_hz = 1e5;  // trial repetition rate f
    double c = 2.0e8;             // speed of light in fiber, m/s
    double l_att_km = 22.0;       // fiber attenuation length
};

struct link_params {
    double l_km = 0.0;  // total distance
    double l0_km = 0.0; // segment length
    double e_d = 0.0;   // depolarizing error weight per measurement
};

struct protocol_params {
    int m = 1;              // half the number of arms per source node
    tree::tree_params tree; // arm encoding
};

struct config {
    hardware_params hw;
    link_params link;
    protocol_params proto;
};

void validate(const hardware_params& hw);
void validate(const link_params& link);
void validate(const config& cfg);

// Photon survival over one feed-forward step of fiber delay.
double survival_per_step(double tau_a, double c, double l_att_km);

// Total per-photon loss seen by an arm photon: half a segment of fiber,
// the wait for state preparation plus two feed-forward steps, and the
// source/detector inefficiencies.
double effective_loss(int m, const tree::tree_params& t, const hardware_params& hw,
                      double l0_km);

// Linear-optics Bell measurement success on two photons with loss epsilon0.
double bell_success(double epsilon0);

// Probability that one trial produces an end-to-end Bell pair.
double trial_success(double p_z, double p_x, double p_b, int m, long long n);

double pair_rate(double p, double source_rate_hz);

// Photons consumed per trial across all source nodes (exact integer).
long long photons_per_trial(int m, long long n, long long q_l);

// Expected photons per generated Bell pair: photons_per_trial / p.
double photons_per_pair(int m, long long n, long long q_l, double p);

// Longest time any photon must survive: state preparation, half a segment
// of travel, and two feed-forward steps.
double max_photon_lifetime(double tau_c, double tau_a, double l0_km, double c);

// Required quantum memory time for an equivalent memory-based scheme.
enum class memory_strategy {
    a, // hold while heralds travel from the midpoint and along the chain
    b  // hold for a full round trip over the whole link
};
double memory_time(memory_strategy s, double l_km, double l0_km, double c,
                   double tau_a);

struct pair_errors {
    double e_x = 0, e_y = 0, e_z = 0;
    double fidelity = 1;
};

// Residual Pauli error rates of the final pair, accumulated over 2(n+1)
// physical Bell-measurement outcomes, 2n logical X and 2(m-1)n logical Z
// tree measurements.
pair_errors final_pair_errors(double e_m, double e_x_bar, double e_z_bar, int m,
                              long long n);

struct scaling_bound {
    double m_choice; // number of arms that balances connection failures
    double q_upp;    // resulting upper bound on photons per pair
};

// Closed-form upper bound on the cost of tuning the protocol so that the
// end-to-end success probability stays at (1-p_b)^x per trial.
scaling_bound scaling_upper_bound(long long n, double p_b, double x);

struct direct_cost {
    double photons; // expected photons per delivered qubit
    double seconds; // expected wait per delivered qubit
};

// Cost of sending single photons straight through the fiber, no repeaters.
direct_cost direct_transmission_cost(double l_km, double source_rate_hz,
                                     double l_att_km);

// Depolarizing weight for a different segment length, chosen so that the
// composed channel over a fixed total distance is unchanged:
// 1 - (4/3) e_new = (1 - (4/3) e_ref)^(l0_new/l0_ref).
double rescale_depolarizing(double e_d_ref, double l0_ref_km, double l0_new_km);

// Number of interior source nodes. Sets *exact to false when l_km is not an
// integer multiple of l0_km (the count is then rounded).
long long segment_count(double l_km, double l0_km, bool* exact = nullptr);

struct evaluation {
    long long n = 0;
    bool segments_exact = true;
    double epsilon0 = 0;
    double e_m = 0;
    long long q_l = 0;
    double tau_s = 0, tau_c = 0;
    double p_z = 0, p_x = 0, p_general = 0;
    double one_minus_p_z = 0, one_minus_p_x = 0, one_minus_p_general = 0;
    double e_z_bar = 0, e_x_bar = 0;
    double p_b = 0;
    double p = 0;
    double rate_hz = 0;
    long long photons_per_trial = 0;
    long long photons_per_node_per_trial = 0;
    double q_bar = 0;
    pair_errors errors;
    double t_max = 0, t_mem_a = 0, t_mem_b = 0;
    tree::tree_metrics tree_metrics;
};

evaluation evaluate(const config& cfg);

} // namespace apqr::model
