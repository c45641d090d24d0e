// Closed-form performance analytics for loss-tolerant tree codes.
//
// A tree is described by its branching vector {b_0, ..., b_l}: the encoded
// root fans out into b_0 first-level qubits, each of which has b_1 children,
// and so on. Logical Z and X measurements on the encoded qubit succeed with
// a probability determined by the per-photon loss epsilon0, using indirect
// measurements through subtrees when a photon is missing. Logical outcomes
// acquire errors from the per-measurement depolarizing error rate e_m via
// parity accumulation and majority voting.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace apqr::tree {

struct tree_params {
    std::vector<int> branches; // b_0 .. b_l, all >= 1

    int depth() const { return static_cast<int>(branches.size()) - 1; }
};

void validate(const tree_params& t);

// Number of photons in the tree below the root: b0 + b0*b1 + ...
// Throws std::overflow_error if the count exceeds the int64 range.
long long tree_qubit_count(const tree_params& t);

// Success probabilities R_k of an indirect Z measurement on a qubit at
// level k, for k = 0 .. l+1 (R_{l+1} = 0: no subtree left to use).
std::vector<double> indirect_success_profile(const tree_params& t, double epsilon0);

// Probability that a logical measurement of the encoded qubit succeeds.
double loss_tolerant_success_general(const tree_params& t, double epsilon0);
double loss_tolerant_success_z(const tree_params& t, double epsilon0);
double loss_tolerant_success_x(const tree_params& t, double epsilon0);

// Effective bit-flip probability of one physical measurement outcome under
// depolarizing noise of weight e_d: two of the three Pauli errors flip it.
double measurement_error_from_depolarizing(double e_d);

// Error probabilities ebar_{I_k} of a *successful* indirect Z measurement at
// level k, for k = 0 .. l. An entry is absent when the corresponding success
// probability R_k is zero (the conditional error is then undefined).
std::vector<std::optional<double>> indirect_error_profile(const tree_params& t,
                                                          double epsilon0, double e_m);

// Error probability of a successful logical Z / X measurement.
std::optional<double> loss_tolerant_error_z(const tree_params& t, double epsilon0,
                                            double e_m);
std::optional<double> loss_tolerant_error_x(const tree_params& t, double epsilon0,
                                            double e_m);

// Success probability of a single indirect-measurement scheme rooted at a
// level-k qubit (one child measured in X, its children measured in Z).
double level_scheme_success(const tree_params& t, double epsilon0, int k);

// Everything above computed in one pass, sharing intermediate results.
struct tree_metrics {
    long long q_l = 0;
    std::vector<double> r_profile;    // R_0 .. R_{l+1}
    std::vector<double> r_complement; // 1 - R_k, kept separately for accuracy
    double p_general = 0, p_z = 0, p_x = 0;
    double one_minus_p_general = 0, one_minus_p_z = 0, one_minus_p_x = 0;
    std::vector<std::optional<double>> err_profile; // ebar_{I_0} .. ebar_{I_l}
    std::optional<double> e_z, e_x;
};

tree_metrics analyze(const tree_params& t, double epsilon0, double e_m);

} // namespace apqr::tree
