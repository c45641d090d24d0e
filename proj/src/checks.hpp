#pragma once

// Self-contained verification suite for the measurement rules the repeater
// protocol relies on. Every rule is exercised on a stabilizer tableau and
// cross-checked against a dense statevector, with measurement corrections
// solved from the states rather than assumed.

#include <string>
#include <vector>

#include "stab.hpp"

namespace apqr::checks {

struct check_result {
    std::string name;
    bool pass = true;
    long cases = 0;
    std::string detail; // first failure, empty when passing
};

// Graph constructors shared with the tests.
stab::graph chain_graph(int n);
stab::graph star_graph(int arms);       // center 0, leaves 1..arms
stab::graph armed_star_graph(int arms); // center 0, arms of three extra qubits each
stab::graph complete_graph(int n);
stab::graph local_complement(const stab::graph& g, int v);
stab::graph remove_vertex(const stab::graph& g, int v);

// X measurements on two adjacent interior qubits of a chain splice their
// neighbours together; the leftover byproduct is X^k1 Z^k2 on one endpoint.
check_result check_rule_xx_contraction();

// A Z measurement deletes the qubit from the graph; outcome 1 leaves Z on
// every former neighbour.
check_result check_rule_z_removal();

// Measuring {X Z, Z X} across an edge is the same operation as first cutting
// the edge and measuring X on both qubits: identical branch probabilities,
// identical post-measurement states, and a Pauli frame relating the branches.
check_result check_bell_equivalence(int max_qubits = 6, int threads = 0);

// Pauli errors commute through the measurements as the error model assumes:
// Z is absorbed by a Z measurement while X flips it, X is absorbed by an X
// measurement while Z flips it, and Z Z on a connected pair acts as Y on
// either side.
check_result check_error_propagation();

// A Y measurement on the hub of a star leaves its neighbours completely
// connected up to S gates on the neighbours and a Pauli byproduct.
check_result check_star_complete();

std::vector<check_result> run_all(int threads = 0);

} // namespace apqr::checks
