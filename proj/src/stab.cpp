#include "stab.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace apqr::stab {

namespace {

// Phase exponent of i in P_a * P_b = i^t P_(a xor b) for one qubit, with
// codes 0=I, 1=X, 2=Z, 3=Y (code = x + 2z).
constexpr uint8_t mul_phase[4][4] = {
    {0, 0, 0, 0}, // I *
    {0, 0, 3, 1}, // X * {I,X,Z,Y}
    {0, 1, 0, 3}, // Z *
    {0, 3, 1, 0}, // Y *
};

int qubit_code(const pauli& p, int q) {
    return static_cast<int>((p.x >> q) & 1u) + 2 * static_cast<int>((p.z >> q) & 1u);
}

void check_qubit_count(int n) {
    if (n < 1 || n > max_tableau_qubits) {
        throw std::invalid_argument("qubit count must be within [1, 24]");
    }
}

void check_observable(const pauli& obs, int n) {
    const uint32_t mask = n >= 32 ? 0xffffffffu : ((1u << n) - 1u);
    if ((obs.x | obs.z) == 0) throw std::invalid_argument("observable must be non-trivial");
    if (((obs.x | obs.z) & ~mask) != 0) {
        throw std::invalid_argument("observable touches qubits outside the register");
    }
    if (obs.phase % 2 != 0) {
        throw std::invalid_argument("observable must be hermitian (sign +/-)");
    }
}

// Column order used by every elimination: x_0, z_0, x_1, z_1, ...
bool column_bit(const pauli& p, int col) {
    const int q = col / 2;
    return col % 2 == 0 ? ((p.x >> q) & 1u) != 0 : ((p.z >> q) & 1u) != 0;
}

// In-place row reduction; returns (column, row index) pivots in order.
std::vector<std::pair<int, size_t>> row_reduce(std::vector<pauli>& rows, int n) {
    std::vector<std::pair<int, size_t>> pivots;
    size_t next_row = 0;
    for (int col = 0; col < 2 * n && next_row < rows.size(); ++col) {
        size_t found = rows.size();
        for (size_t r = next_row; r < rows.size(); ++r) {
            if (column_bit(rows[r], col)) {
                found = r;
                break;
            }
        }
        if (found == rows.size()) continue;
        std::swap(rows[next_row], rows[found]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r != next_row && column_bit(rows[r], col)) {
                rows[r] = multiply(rows[r], rows[next_row]);
            }
        }
        pivots.emplace_back(col, next_row);
        ++next_row;
    }
    return pivots;
}

// Expresses obs's bit pattern as a product of the reduced rows; returns the
// signed group element with those bits, or nullopt if not in the group.
std::optional<pauli> reduce_to_member(const std::vector<pauli>& rows,
                                      const std::vector<std::pair<int, size_t>>& pivots,
                                      const pauli& obs) {
    pauli prod; // identity
    for (const auto& [col, r] : pivots) {
        const pauli current{obs.x ^ prod.x, obs.z ^ prod.z, 0};
        if (column_bit(current, col)) prod = multiply(prod, rows[r]);
    }
    if (prod.x != obs.x || prod.z != obs.z) return std::nullopt;
    return prod;
}

} // namespace

pauli pauli_x(int q) { return pauli{1u << q, 0, 0}; }
pauli pauli_y(int q) { return pauli{1u << q, 1u << q, 0}; }
pauli pauli_z(int q) { return pauli{0, 1u << q, 0}; }

pauli multiply(const pauli& a, const pauli& b) {
    pauli out;
    out.x = a.x ^ b.x;
    out.z = a.z ^ b.z;
    unsigned phase = a.phase + b.phase;
    uint32_t touched = (a.x | a.z) & (b.x | b.z);
    while (touched != 0) {
        const int q = std::countr_zero(touched);
        touched &= touched - 1;
        phase += mul_phase[qubit_code(a, q)][qubit_code(b, q)];
    }
    out.phase = static_cast<uint8_t>(phase & 3u);
    return out;
}

bool commutes(const pauli& a, const pauli& b) {
    const bool p1 = (std::popcount(a.x & b.z) & 1) != 0;
    const bool p2 = (std::popcount(a.z & b.x) & 1) != 0;
    return p1 == p2;
}

std::string to_string(const pauli& p, int n) {
    static const char* signs[4] = {"+", "+i", "-", "-i"};
    std::string out = signs[p.phase & 3];
    bool any = false;
    for (int q = 0; q < n; ++q) {
        static const char letters[4] = {'I', 'X', 'Z', 'Y'};
        const int code = qubit_code(p, q);
        if (code == 0) continue;
        if (any) out += ' ';
        out += letters[code];
        out += std::to_string(q);
        any = true;
    }
    if (!any) out += 'I';
    return out;
}

pauli parse_pauli(const std::string& s, int n) {
    check_qubit_count(n);
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && (s[i] == ' ' || s[i] == '*')) ++i;
    };
    pauli out;
    skip_ws();
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        const bool neg = s[i] == '-';
        ++i;
        if (i < s.size() && s[i] == 'i') {
            out.phase = neg ? 3 : 1;
            ++i;
        } else if (neg) {
            out.phase = 2;
        }
    }
    bool any = false;
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        const char letter = s[i];
        ++i;
        if (letter == 'I') {
            any = true;
            continue;
        }
        if (letter != 'X' && letter != 'Y' && letter != 'Z') {
            throw std::invalid_argument("bad Pauli letter in '" + s + "'");
        }
        size_t start = i;
        while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
        if (start == i) throw std::invalid_argument("missing qubit index in '" + s + "'");
        const int q = std::stoi(s.substr(start, i - start));
        if (q < 0 || q >= n) throw std::invalid_argument("qubit index out of range in '" + s + "'");
        const pauli single = letter == 'X' ? pauli_x(q) : letter == 'Y' ? pauli_y(q) : pauli_z(q);
        out = multiply(out, single);
        any = true;
    }
    if (!any) throw std::invalid_argument("empty Pauli string");
    return out;
}

void validate(const graph& g) {
    check_qubit_count(g.n);
    std::vector<std::pair<int, int>> seen;
    for (const auto& [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b) {
            throw std::invalid_argument("graph edge out of range");
        }
        const std::pair<int, int> key = std::minmax(a, b);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw std::invalid_argument("duplicate graph edge");
        }
        seen.push_back(key);
    }
}

tableau::tableau(int n) : n_(n) {
    check_qubit_count(n);
    gens_.reserve(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) gens_.push_back(pauli_x(q));
}

tableau tableau::graph_state(const graph& g) {
    validate(g);
    tableau t(g.n);
    std::vector<uint32_t> adj(static_cast<size_t>(g.n), 0);
    for (const auto& [a, b] : g.edges) {
        adj[static_cast<size_t>(a)] |= 1u << b;
        adj[static_cast<size_t>(b)] |= 1u << a;
    }
    for (int q = 0; q < g.n; ++q) {
        t.gens_[static_cast<size_t>(q)] = pauli{1u << q, adj[static_cast<size_t>(q)], 0};
    }
    return t;
}

measure_result tableau::measure(const pauli& obs, std::optional<int> forced) {
    check_observable(obs, n_);
    if (forced.has_value() && *forced != 0 && *forced != 1) {
        throw std::invalid_argument("forced outcome must be 0 or 1");
    }
    std::vector<size_t> anti;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (!commutes(gens_[i], obs)) anti.push_back(i);
    }
    measure_result res;
    if (!anti.empty()) {
        const size_t pivot = anti[0];
        for (size_t i = 1; i < anti.size(); ++i) {
            gens_[anti[i]] = multiply(gens_[anti[i]], gens_[pivot]);
        }
        res.outcome = forced.value_or(0);
        res.random = true;
        gens_[pivot] = obs;
        gens_[pivot].phase = static_cast<uint8_t>((obs.phase + 2 * res.outcome) & 3);
        return res;
    }
    // Outcome is fixed by the state: find obs's sign within the group.
    std::vector<pauli> rows = gens_;
    const auto pivots = row_reduce(rows, n_);
    const auto member = reduce_to_member(rows, pivots, obs);
    if (!member.has_value()) {
        throw std::logic_error("commuting observable not generated by a full tableau");
    }
    res.deterministic = true;
    res.outcome = ((obs.phase - member->phase) & 3) == 0 ? 0 : 1;
    if (forced.has_value() && *forced != res.outcome) res.impossible = true;
    return res;
}

measure_result tableau::measure_qubit(int q, char basis, std::optional<int> forced) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    switch (basis) {
    case 'X': return measure(pauli_x(q), forced);
    case 'Y': return measure(pauli_y(q), forced);
    case 'Z': return measure(pauli_z(q), forced);
    default: throw std::invalid_argument("basis must be X, Y, or Z");
    }
}

void tableau::apply_pauli(const pauli& p) {
    check_observable(p, n_);
    for (pauli& g : gens_) {
        if (!commutes(g, p)) g.phase = static_cast<uint8_t>((g.phase + 2) & 3);
    }
}

void tableau::apply_cz(int a, int b) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
        throw std::invalid_argument("bad qubit pair");
    }
    for (pauli& g : gens_) {
        const uint32_t xa = (g.x >> a) & 1u, xb = (g.x >> b) & 1u;
        const uint32_t za = (g.z >> a) & 1u, zb = (g.z >> b) & 1u;
        if ((xa & xb & (za ^ zb)) != 0) g.phase = static_cast<uint8_t>((g.phase + 2) & 3);
        g.z ^= xb << a;
        g.z ^= xa << b;
    }
}

void tableau::apply_s(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    for (pauli& g : gens_) {
        if (((g.x >> q) & 1u) != 0) {
            if (((g.z >> q) & 1u) != 0) g.phase = static_cast<uint8_t>((g.phase + 2) & 3);
            g.z ^= 1u << q;
        }
    }
}

void tableau::apply_sdg(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    for (pauli& g : gens_) {
        if (((g.x >> q) & 1u) != 0) {
            if (((g.z >> q) & 1u) == 0) g.phase = static_cast<uint8_t>((g.phase + 2) & 3);
            g.z ^= 1u << q;
        }
    }
}

void tableau::apply_h(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    for (pauli& g : gens_) {
        const uint32_t xq = (g.x >> q) & 1u, zq = (g.z >> q) & 1u;
        if ((xq & zq) != 0) g.phase = static_cast<uint8_t>((g.phase + 2) & 3);
        g.x = (g.x & ~(1u << q)) | (zq << q);
        g.z = (g.z & ~(1u << q)) | (xq << q);
    }
}

std::optional<uint8_t> tableau::group_sign(const pauli& obs) const {
    std::vector<pauli> rows = gens_;
    const auto pivots = row_reduce(rows, n_);
    const auto member = reduce_to_member(rows, pivots, obs);
    if (!member.has_value()) return std::nullopt;
    return member->phase;
}

tableau tableau::remove_qubits(uint32_t removed_mask) const {
    const uint32_t reg_mask = n_ >= 32 ? 0xffffffffu : ((1u << n_) - 1u);
    if (removed_mask == 0 || (removed_mask & ~reg_mask) != 0 ||
        removed_mask == reg_mask) {
        throw std::invalid_argument("must remove a proper non-empty qubit subset");
    }
    std::vector<pauli> rows = gens_;
    std::vector<bool> is_pivot(rows.size(), false);
    for (int q = 0; q < n_; ++q) {
        if (((removed_mask >> q) & 1u) == 0) continue;
        for (const int col : {2 * q, 2 * q + 1}) {
            size_t pivot = rows.size();
            for (size_t r = 0; r < rows.size(); ++r) {
                if (!is_pivot[r] && column_bit(rows[r], col)) {
                    pivot = r;
                    break;
                }
            }
            if (pivot == rows.size()) continue;
            is_pivot[pivot] = true;
            for (size_t r = 0; r < rows.size(); ++r) {
                if (r != pivot && column_bit(rows[r], col)) {
                    rows[r] = multiply(rows[r], rows[pivot]);
                }
            }
        }
    }
    std::vector<pauli> kept;
    std::vector<pauli> crossing; // rows pivoted on a removed column
    for (size_t r = 0; r < rows.size(); ++r) {
        const uint32_t support = rows[r].x | rows[r].z;
        if (is_pivot[r]) {
            crossing.push_back(rows[r]);
        } else {
            if ((support & removed_mask) != 0) {
                throw std::logic_error("row reduction left support on removed qubits");
            }
            kept.push_back(rows[r]);
        }
    }
    const int new_n = n_ - std::popcount(removed_mask);
    if (static_cast<int>(kept.size()) != new_n) {
        throw std::runtime_error("state does not factor over the removed qubits");
    }
    // A crossing row may still touch kept qubits; the state factors exactly
    // when that residue lies in the span of the kept rows.
    if (!crossing.empty()) {
        std::vector<pauli> reduced = kept;
        const auto pivots = row_reduce(reduced, n_);
        for (pauli row : crossing) {
            for (const auto& [col, idx] : pivots) {
                if (column_bit(row, col)) row = multiply(row, reduced[idx]);
            }
            if (((row.x | row.z) & ~removed_mask) != 0) {
                throw std::runtime_error(
                    "state does not factor over the removed qubits");
            }
        }
    }
    // Compress qubit indices.
    std::vector<int> new_index(static_cast<size_t>(n_), -1);
    int next = 0;
    for (int q = 0; q < n_; ++q) {
        if (((removed_mask >> q) & 1u) == 0) new_index[static_cast<size_t>(q)] = next++;
    }
    tableau out(new_n == 0 ? 1 : new_n);
    out.n_ = new_n;
    out.gens_.clear();
    for (const pauli& row : kept) {
        pauli g;
        g.phase = row.phase;
        for (int q = 0; q < n_; ++q) {
            const int nq = new_index[static_cast<size_t>(q)];
            if (nq < 0) continue;
            if (((row.x >> q) & 1u) != 0) g.x |= 1u << nq;
            if (((row.z >> q) & 1u) != 0) g.z |= 1u << nq;
        }
        out.gens_.push_back(g);
    }
    return out;
}

std::vector<pauli> canonical_form(const tableau& t) {
    std::vector<pauli> rows = t.generators();
    row_reduce(rows, t.num_qubits());
    return rows;
}

bool groups_equal_signed(const tableau& a, const tableau& b) {
    if (a.num_qubits() != b.num_qubits()) return false;
    return canonical_form(a) == canonical_form(b);
}

bool groups_equal_unsigned(const tableau& a, const tableau& b) {
    if (a.num_qubits() != b.num_qubits()) return false;
    const auto ca = canonical_form(a);
    const auto cb = canonical_form(b);
    for (size_t i = 0; i < ca.size(); ++i) {
        if (ca[i].x != cb[i].x || ca[i].z != cb[i].z) return false;
    }
    return true;
}

std::optional<pauli> pauli_correction(const tableau& a, const tableau& b,
                                      uint32_t allowed_mask) {
    if (!groups_equal_unsigned(a, b)) return std::nullopt;
    const auto ca = canonical_form(a);
    const auto cb = canonical_form(b);
    const int n = a.num_qubits();
    // Unknowns: px_q then pz_q for allowed qubits; equation per generator:
    // sum of anticommutations with the correction must match the sign gap.
    struct eq {
        uint64_t lhs;
        int rhs;
    };
    std::vector<int> x_slot(static_cast<size_t>(n), -1), z_slot(static_cast<size_t>(n), -1);
    int slots = 0;
    for (int q = 0; q < n; ++q) {
        if (((allowed_mask >> q) & 1u) != 0) {
            x_slot[static_cast<size_t>(q)] = slots++;
            z_slot[static_cast<size_t>(q)] = slots++;
        }
    }
    std::vector<eq> eqs;
    for (size_t i = 0; i < ca.size(); ++i) {
        eq e{0, ((cb[i].phase - ca[i].phase) & 3) == 2 ? 1 : 0};
        if (((cb[i].phase - ca[i].phase) & 1) != 0) return std::nullopt; // non-real gap
        for (int q = 0; q < n; ++q) {
            // px_q anticommutes with a generator's Z part, pz_q with its X part.
            if (((ca[i].z >> q) & 1u) != 0 && x_slot[static_cast<size_t>(q)] >= 0) {
                e.lhs ^= 1ull << x_slot[static_cast<size_t>(q)];
            }
            if (((ca[i].x >> q) & 1u) != 0 && z_slot[static_cast<size_t>(q)] >= 0) {
                e.lhs ^= 1ull << z_slot[static_cast<size_t>(q)];
            }
        }
        eqs.push_back(e);
    }
    // Gaussian elimination over GF(2).
    std::vector<uint64_t> pivot_row(static_cast<size_t>(slots), 0);
    std::vector<int> pivot_rhs(static_cast<size_t>(slots), 0);
    std::vector<bool> have_pivot(static_cast<size_t>(slots), false);
    for (eq& e : eqs) {
        for (int s = 0; s < slots; ++s) {
            if (((e.lhs >> s) & 1ull) == 0) continue;
            if (have_pivot[static_cast<size_t>(s)]) {
                e.lhs ^= pivot_row[static_cast<size_t>(s)];
                e.rhs ^= pivot_rhs[static_cast<size_t>(s)];
            } else {
                have_pivot[static_cast<size_t>(s)] = true;
                pivot_row[static_cast<size_t>(s)] = e.lhs;
                pivot_rhs[static_cast<size_t>(s)] = e.rhs;
                e.lhs = 0;
                e.rhs = 0;
                break;
            }
        }
        if (e.lhs == 0 && e.rhs != 0) return std::nullopt; // inconsistent
    }
    // Back-substitute with free variables set to zero.
    std::vector<int> value(static_cast<size_t>(slots), 0);
    for (int s = slots - 1; s >= 0; --s) {
        if (!have_pivot[static_cast<size_t>(s)]) continue;
        int v = pivot_rhs[static_cast<size_t>(s)];
        for (int s2 = s + 1; s2 < slots; ++s2) {
            if (((pivot_row[static_cast<size_t>(s)] >> s2) & 1ull) != 0) {
                v ^= value[static_cast<size_t>(s2)];
            }
        }
        value[static_cast<size_t>(s)] = v;
    }
    pauli p;
    for (int q = 0; q < n; ++q) {
        if (x_slot[static_cast<size_t>(q)] >= 0 && value[static_cast<size_t>(x_slot[static_cast<size_t>(q)])] != 0) {
            p.x |= 1u << q;
        }
        if (z_slot[static_cast<size_t>(q)] >= 0 && value[static_cast<size_t>(z_slot[static_cast<size_t>(q)])] != 0) {
            p.z |= 1u << q;
        }
    }
    // The solve is exact; double-check by applying the correction.
    if ((p.x | p.z) != 0) {
        tableau ap = a;
        ap.apply_pauli(p);
        if (!groups_equal_signed(ap, b)) {
            throw std::logic_error("pauli correction failed verification");
        }
    } else if (!groups_equal_signed(a, b)) {
        return std::nullopt;
    }
    return p;
}

} // namespace apqr::stab
