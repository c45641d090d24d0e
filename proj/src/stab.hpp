// Small stabilizer-tableau engine used to verify the graph-state rewrite
// rules the repeater analysis relies on. States are tracked as n commuting
// signed Pauli generators over at most 24 qubits (bitmask representation).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apqr::stab {

inline constexpr int max_tableau_qubits = 24;

// i^phase * product over qubits of {I, X, Z, Y} selected by the (x, z) bit
// pair; (1,1) means the literal Y matrix. Hermitian operators have phase 0
// (sign +) or 2 (sign -).
struct pauli {
    uint32_t x = 0;
    uint32_t z = 0;
    uint8_t phase = 0; // exponent of i, mod 4

    bool operator==(const pauli& o) const = default;
};

pauli pauli_x(int q);
pauli pauli_y(int q);
pauli pauli_z(int q);
pauli multiply(const pauli& a, const pauli& b);
bool commutes(const pauli& a, const pauli& b);
std::string to_string(const pauli& p, int n);

// Parses strings like "+X0 Z3", "-Y1", "Z0*Z1", "I". Throws on bad input.
pauli parse_pauli(const std::string& s, int n);

struct graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

void validate(const graph& g);

struct measure_result {
    int outcome = 0;          // 0 -> +1 eigenvalue, 1 -> -1
    bool deterministic = false;
    bool impossible = false;  // forced branch has probability zero
    bool random = false;      // outcome was free; forced (or 0) was applied
};

class tableau {
  public:
    explicit tableau(int n); // |0...0> is not assumed; starts as |+>^n
    static tableau graph_state(const graph& g);

    int num_qubits() const { return n_; }
    const std::vector<pauli>& generators() const { return gens_; }

    // Measures a hermitian Pauli observable. When the outcome is random the
    // forced value (default 0) selects the branch; when it is deterministic
    // a conflicting forced value reports impossible and leaves the state
    // unchanged.
    measure_result measure(const pauli& obs, std::optional<int> forced = std::nullopt);

    // Single-qubit convenience: basis is 'X', 'Y', or 'Z'.
    measure_result measure_qubit(int q, char basis,
                                 std::optional<int> forced = std::nullopt);

    // Unitary updates.
    void apply_pauli(const pauli& p); // conjugation: only generator signs move
    void apply_cz(int a, int b);
    void apply_s(int q);
    void apply_sdg(int q);
    void apply_h(int q);

    // Membership of the signed operator group generated by the tableau.
    // Returns the sign exponent (0 or 2) the group assigns to obs's bit
    // pattern, or nullopt when the pattern is not in the group.
    std::optional<uint8_t> group_sign(const pauli& obs) const;

    // Factors out the given qubits. The remaining generators must not touch
    // them and the pivots must act only on them, otherwise the state does
    // not factorize and this throws.
    tableau remove_qubits(uint32_t removed_mask) const;

  private:
    int n_;
    std::vector<pauli> gens_;
};

// Canonical signed generating set (row-reduced over a fixed column order);
// equal groups produce identical canonical forms.
std::vector<pauli> canonical_form(const tableau& t);

bool groups_equal_signed(const tableau& a, const tableau& b);
bool groups_equal_unsigned(const tableau& a, const tableau& b);

// A Pauli P (restricted to allowed_mask) with P a P^dag = b as signed
// groups; requires the unsigned groups to match. nullopt when no such
// correction exists.
std::optional<pauli> pauli_correction(const tableau& a, const tableau& b,
                                      uint32_t allowed_mask);

} // namespace apqr::stab
