#pragma once

// Dense statevector simulator for small registers. Used to cross-check the
// stabilizer tableau on the circuit identities the repeater relies on.

#include <complex>
#include <cstdint>
#include <vector>

#include "stab.hpp"

namespace apqr::sv {

inline constexpr int max_statevec_qubits = 14;

class state {
  public:
    static state plus_state(int n);
    static state graph_state(const stab::graph& g);

    int num_qubits() const { return n_; }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }

    void apply_cz(int a, int b);
    void apply_h(int q);
    void apply_s(int q);
    void apply_sdg(int q);
    void apply_pauli(const stab::pauli& p);

    // Projects onto the (-1)^outcome eigenspace of a hermitian Pauli and
    // renormalizes; returns the branch probability (0 leaves the state
    // untouched).
    double project(const stab::pauli& obs, int outcome);

    // Drops qubits that are in a tensor-product factor with the rest. Throws
    // if the state does not factor over the removed set.
    state remove_qubits(uint32_t removed_mask) const;

    double norm() const;

  private:
    explicit state(int n);

    int n_ = 0;
    std::vector<std::complex<double>> amp_;
};

// Amplitude-level equality up to one global phase.
bool equal_up_to_phase(const state& a, const state& b, double tol = 1e-9);

// Strict amplitude-level equality (shared phase included).
bool equal_exact(const state& a, const state& b, double tol = 1e-9);

} // namespace apqr::sv
