#include "checks.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "statevec.hpp"

namespace apqr::checks {

namespace {

using stab::graph;
using stab::pauli;
using stab::tableau;

struct recorder {
    check_result res;
    explicit recorder(std::string name) { res.name = std::move(name); }
    void item() { ++res.cases; }
    bool require(bool ok, const std::string& what) {
        if (!ok && res.pass) {
            res.pass = false;
            res.detail = what;
        }
        return ok;
    }
};

uint32_t neighbor_mask(const graph& g, int v) {
    uint32_t mask = 0;
    for (const auto& [a, b] : g.edges) {
        if (a == v) mask |= 1u << b;
        if (b == v) mask |= 1u << a;
    }
    return mask;
}

// New index of a kept qubit once the masked qubits are dropped.
int compressed_index(uint32_t removed_mask, int q) {
    return q - std::popcount(removed_mask & ((1u << q) - 1u));
}

uint32_t compress_mask(uint32_t mask, uint32_t removed_mask) {
    uint32_t out = 0;
    for (int q = 0; q < 32; ++q) {
        if (((mask >> q) & 1u) != 0) out |= 1u << compressed_index(removed_mask, q);
    }
    return out;
}

std::string branch_tag(const std::string& where, std::initializer_list<int> bits) {
    std::ostringstream os;
    os << where << " branch";
    for (int b : bits) os << ' ' << b;
    return os.str();
}

} // namespace

graph chain_graph(int n) {
    graph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
    stab::validate(g);
    return g;
}

graph star_graph(int arms) {
    graph g;
    g.n = arms + 1;
    for (int i = 1; i <= arms; ++i) g.edges.push_back({0, i});
    stab::validate(g);
    return g;
}

graph armed_star_graph(int arms) {
    graph g;
    g.n = 4 * arms + 1;
    for (int i = 0; i < arms; ++i) {
        const int a = 1 + 4 * i;
        g.edges.push_back({0, a});
        g.edges.push_back({a, a + 1});
        g.edges.push_back({a + 1, a + 2});
        g.edges.push_back({a + 2, a + 3});
    }
    stab::validate(g);
    return g;
}

graph complete_graph(int n) {
    graph g;
    g.n = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
    }
    stab::validate(g);
    return g;
}

graph local_complement(const graph& g, int v) {
    stab::validate(g);
    if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
    std::vector<uint32_t> adj(static_cast<size_t>(g.n), 0);
    for (const auto& [a, b] : g.edges) {
        adj[static_cast<size_t>(a)] |= 1u << b;
        adj[static_cast<size_t>(b)] |= 1u << a;
    }
    const uint32_t nb = adj[static_cast<size_t>(v)];
    graph out;
    out.n = g.n;
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            bool edge = ((adj[static_cast<size_t>(i)] >> j) & 1u) != 0;
            if (((nb >> i) & 1u) != 0 && ((nb >> j) & 1u) != 0) edge = !edge;
            if (edge) out.edges.push_back({i, j});
        }
    }
    return out;
}

graph remove_vertex(const graph& g, int v) {
    stab::validate(g);
    if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
    if (g.n < 2) throw std::invalid_argument("cannot remove the last vertex");
    graph out;
    out.n = g.n - 1;
    for (const auto& [a, b] : g.edges) {
        if (a == v || b == v) continue;
        out.edges.push_back({a > v ? a - 1 : a, b > v ? b - 1 : b});
    }
    return out;
}

check_result check_rule_xx_contraction() {
    recorder rec("xx_contraction");
    for (int len = 4; len <= 8; ++len) {
        const graph g = chain_graph(len);
        const graph expected = chain_graph(len - 2);
        const tableau te = tableau::graph_state(expected);
        const sv::state se = sv::state::graph_state(expected);
        const uint32_t removed = (1u << 1) | (1u << 2);
        for (int k1 = 0; k1 <= 1; ++k1) {
            for (int k2 = 0; k2 <= 1; ++k2) {
                rec.item();
                const std::string tag = branch_tag("chain " + std::to_string(len), {k1, k2});
                tableau t = tableau::graph_state(g);
                const auto r1 = t.measure(stab::pauli_x(1), k1);
                const auto r2 = t.measure(stab::pauli_x(2), k2);
                if (!rec.require(r1.random && r2.random, tag + ": outcomes should be coin flips")) continue;
                const tableau tr = t.remove_qubits(removed);
                const auto corr = stab::pauli_correction(tr, te, 1u);
                if (!rec.require(corr.has_value(), tag + ": no endpoint byproduct found")) continue;
                const uint32_t want_x = k1 != 0 ? 1u : 0u;
                const uint32_t want_z = k2 != 0 ? 1u : 0u;
                if (!rec.require(corr->x == want_x && corr->z == want_z,
                                 tag + ": byproduct is not X^k1 Z^k2 on the endpoint")) {
                    continue;
                }
                sv::state s = sv::state::graph_state(g);
                const double p1 = s.project(stab::pauli_x(1), k1);
                const double p2 = s.project(stab::pauli_x(2), k2);
                if (!rec.require(std::abs(p1 - 0.5) < 1e-9 && std::abs(p2 - 0.5) < 1e-9,
                                 tag + ": branch probabilities should be 1/2")) {
                    continue;
                }
                sv::state sr = s.remove_qubits(removed);
                if ((corr->x | corr->z) != 0) sr.apply_pauli(*corr);
                rec.require(sv::equal_up_to_phase(sr, se),
                            tag + ": statevector disagrees with the corrected pair state");
            }
        }
    }
    return rec.res;
}

check_result check_rule_z_removal() {
    recorder rec("z_removal");
    std::vector<graph> graphs;
    for (int arms = 1; arms <= 6; ++arms) graphs.push_back(star_graph(arms));
    for (int len = 2; len <= 7; ++len) graphs.push_back(chain_graph(len));
    for (const graph& g : graphs) {
        for (int v = 0; v < g.n; ++v) {
            const graph expected = remove_vertex(g, v);
            const tableau te = tableau::graph_state(expected);
            const sv::state se = sv::state::graph_state(expected);
            const uint32_t nb = neighbor_mask(g, v);
            const uint32_t nb_c = compress_mask(nb, 1u << v);
            for (int k = 0; k <= 1; ++k) {
                rec.item();
                std::ostringstream tag;
                tag << "graph n=" << g.n << " v=" << v << " k=" << k;
                tableau t = tableau::graph_state(g);
                const auto r = t.measure(stab::pauli_z(v), k);
                if (!rec.require(r.random, tag.str() + ": outcome should be a coin flip")) continue;
                const tableau tr = t.remove_qubits(1u << v);
                const auto corr = stab::pauli_correction(tr, te, nb_c);
                if (!rec.require(corr.has_value(), tag.str() + ": no neighbour byproduct found")) continue;
                const uint32_t want_z = k != 0 ? nb_c : 0u;
                if (!rec.require(corr->x == 0 && corr->z == want_z,
                                 tag.str() + ": byproduct is not Z^k on the neighbours")) {
                    continue;
                }
                sv::state s = sv::state::graph_state(g);
                const double p = s.project(stab::pauli_z(v), k);
                if (!rec.require(std::abs(p - 0.5) < 1e-9, tag.str() + ": branch probability should be 1/2")) {
                    continue;
                }
                sv::state sr = s.remove_qubits(1u << v);
                if ((corr->x | corr->z) != 0) sr.apply_pauli(*corr);
                rec.require(sv::equal_up_to_phase(sr, se),
                            tag.str() + ": statevector disagrees with the corrected graph state");
            }
        }
    }
    return rec.res;
}

check_result check_bell_equivalence(int max_qubits, int threads) {
    if (max_qubits < 2 || max_qubits > 6) {
        throw std::invalid_argument("bell equivalence sweep supports 2 to 6 qubits");
    }
    recorder rec("bell_equivalence");
    for (int n = 2; n <= max_qubits; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) slots.push_back({i, j});
        }
        const uint64_t total = uint64_t{1} << slots.size();
        struct local {
            long cases = 0;
            bool pass = true;
            std::string detail;
        };
        std::vector<local> parts(par::chunk_count(total));
        par::for_chunks(total, threads, [&](size_t chunk, uint64_t begin, uint64_t end) {
            local& out = parts[chunk];
            auto fail = [&](const std::string& what) {
                if (out.pass) {
                    out.pass = false;
                    out.detail = what;
                }
                return false;
            };
            auto require = [&](bool ok, const std::string& what) { return ok ? true : fail(what); };
            for (uint64_t mask = begin; mask < end; ++mask) {
                graph g;
                g.n = n;
                for (size_t s = 0; s < slots.size(); ++s) {
                    if (((mask >> s) & 1ull) != 0) g.edges.push_back(slots[s]);
                }
                for (const auto& [a, b] : slots) {
                    // Route B works on the graph with the a-b edge toggled.
                    graph h = g;
                    const auto it = std::find(h.edges.begin(), h.edges.end(), std::make_pair(a, b));
                    if (it != h.edges.end()) h.edges.erase(it);
                    else h.edges.push_back({a, b});
                    const tableau ta_base = tableau::graph_state(g);
                    const tableau tb_base = tableau::graph_state(h);
                    const sv::state sa_base = sv::state::graph_state(g);
                    const sv::state sb_base = sv::state::graph_state(h);
                    const pauli obs1{1u << a, 1u << b, 0}; // X Z across the edge
                    const pauli obs2{1u << b, 1u << a, 0}; // Z X across the edge
                    const uint32_t pair_mask = (1u << a) | (1u << b);
                    struct branch_state {
                        bool possible = false;
                        tableau trem{1};
                        sv::state srem = sv::state::plus_state(1);
                    };
                    std::vector<branch_state> branches;
                    int ref = -1;
                    for (int alpha = 0; alpha <= 1; ++alpha) {
                        for (int beta = 0; beta <= 1; ++beta) {
                            ++out.cases;
                            std::ostringstream tag;
                            tag << "n=" << n << " graph=" << mask << " pair=(" << a << "," << b
                                << ") branch " << alpha << beta;
                            tableau ta = ta_base;
                            const auto ra1 = ta.measure(stab::pauli_x(a), alpha);
                            bool imp_a = ra1.impossible;
                            if (!imp_a) imp_a = ta.measure(stab::pauli_x(b), beta).impossible;
                            tableau tb = tb_base;
                            const auto rb1 = tb.measure(obs1, alpha);
                            bool imp_b = rb1.impossible;
                            if (!imp_b) imp_b = tb.measure(obs2, beta).impossible;
                            if (!require(imp_a == imp_b, tag.str() + ": routes disagree on feasibility")) continue;
                            sv::state sa = sa_base;
                            double pa = sa.project(stab::pauli_x(a), alpha);
                            if (pa > 1e-12) pa *= sa.project(stab::pauli_x(b), beta);
                            sv::state sb = sb_base;
                            double pb = sb.project(obs1, alpha);
                            if (pb > 1e-12) pb *= sb.project(obs2, beta);
                            if (!require(std::abs(pa - pb) < 1e-9, tag.str() + ": branch probabilities differ")) continue;
                            if (!require((pa < 1e-12) == imp_a,
                                         tag.str() + ": tableau feasibility disagrees with probability")) {
                                continue;
                            }
                            branches.emplace_back();
                            branch_state& bs = branches.back();
                            if (imp_a) continue;
                            bs.possible = true;
                            tableau tb_undone = tb;
                            tb_undone.apply_cz(a, b);
                            if (!require(stab::groups_equal_signed(ta, tb_undone),
                                         tag.str() + ": stabilizers differ after undoing the edge")) {
                                continue;
                            }
                            sv::state sb_undone = sb;
                            sb_undone.apply_cz(a, b);
                            if (!require(sv::equal_exact(sa, sb_undone),
                                         tag.str() + ": amplitudes differ after undoing the edge")) {
                                continue;
                            }
                            if (n == 2) continue;
                            bs.trem = ta.remove_qubits(pair_mask);
                            bs.srem = sa.remove_qubits(pair_mask);
                            const tableau tb_rem = tb.remove_qubits(pair_mask);
                            const sv::state sb_rem = sb.remove_qubits(pair_mask);
                            if (!require(stab::groups_equal_signed(bs.trem, tb_rem),
                                         tag.str() + ": leftover stabilizers differ between routes")) {
                                continue;
                            }
                            if (!require(sv::equal_up_to_phase(bs.srem, sb_rem),
                                         tag.str() + ": leftover amplitudes differ between routes")) {
                                continue;
                            }
                            if (ref < 0) {
                                ref = static_cast<int>(branches.size()) - 1;
                            } else {
                                const auto corr = stab::pauli_correction(
                                    bs.trem, branches[static_cast<size_t>(ref)].trem, 0xffffffffu >> (32 - (n - 2)));
                                if (!require(corr.has_value(),
                                             tag.str() + ": no Pauli frame relates the branches")) {
                                    continue;
                                }
                                sv::state fixed = bs.srem;
                                if ((corr->x | corr->z) != 0) fixed.apply_pauli(*corr);
                                require(sv::equal_up_to_phase(fixed, branches[static_cast<size_t>(ref)].srem),
                                        tag.str() + ": Pauli frame fails on the amplitudes");
                            }
                        }
                    }
                }
            }
        });
        for (const local& part : parts) {
            rec.res.cases += part.cases;
            if (!part.pass) rec.require(false, part.detail);
        }
    }
    return rec.res;
}

check_result check_error_propagation() {
    recorder rec("error_propagation");
    // Z measurement: a prior Z on the measured qubit is absorbed, a prior X
    // flips the recorded outcome; either way the leftover state is a clean
    // branch of the error-free measurement.
    for (const graph& g : {star_graph(3), chain_graph(4)}) {
        for (int v = 0; v < g.n; ++v) {
            tableau base_t[2] = {tableau::graph_state(g), tableau::graph_state(g)};
            sv::state base_s[2] = {sv::state::graph_state(g), sv::state::graph_state(g)};
            std::optional<tableau> base_rem_t[2];
            std::optional<sv::state> base_rem_s[2];
            for (int k = 0; k <= 1; ++k) {
                base_t[k].measure(stab::pauli_z(v), k);
                base_rem_t[k] = base_t[k].remove_qubits(1u << v);
                base_s[k].project(stab::pauli_z(v), k);
                base_rem_s[k] = base_s[k].remove_qubits(1u << v);
            }
            for (const char err : {'Z', 'X'}) {
                for (int k = 0; k <= 1; ++k) {
                    rec.item();
                    std::ostringstream tag;
                    tag << "Z-measurement n=" << g.n << " v=" << v << " err=" << err << " k=" << k;
                    const int clean = err == 'Z' ? k : 1 - k;
                    const pauli e = err == 'Z' ? stab::pauli_z(v) : stab::pauli_x(v);
                    tableau t = tableau::graph_state(g);
                    t.apply_pauli(e);
                    const auto r = t.measure(stab::pauli_z(v), k);
                    if (!rec.require(r.random && !r.impossible, tag.str() + ": outcome should stay a coin flip")) {
                        continue;
                    }
                    const tableau tr = t.remove_qubits(1u << v);
                    if (!rec.require(stab::groups_equal_signed(tr, *base_rem_t[clean]),
                                     tag.str() + ": leftover state is not the matching clean branch")) {
                        continue;
                    }
                    sv::state s = sv::state::graph_state(g);
                    s.apply_pauli(e);
                    const double p = s.project(stab::pauli_z(v), k);
                    if (!rec.require(std::abs(p - 0.5) < 1e-9, tag.str() + ": branch probability should be 1/2")) {
                        continue;
                    }
                    const sv::state sr = s.remove_qubits(1u << v);
                    rec.require(sv::equal_up_to_phase(sr, *base_rem_s[clean]),
                                tag.str() + ": amplitudes do not match the clean branch");
                }
            }
        }
    }
    // X measurement on a chain connector: a prior X is absorbed, a prior Z
    // flips the recorded outcome.
    {
        const graph g = chain_graph(4);
        const uint32_t removed = (1u << 1) | (1u << 2);
        tableau base_rem_t[2][2] = {{tableau{1}, tableau{1}}, {tableau{1}, tableau{1}}};
        sv::state base_rem_s[2][2] = {{sv::state::plus_state(1), sv::state::plus_state(1)},
                                      {sv::state::plus_state(1), sv::state::plus_state(1)}};
        for (int k1 = 0; k1 <= 1; ++k1) {
            for (int k2 = 0; k2 <= 1; ++k2) {
                tableau t = tableau::graph_state(g);
                t.measure(stab::pauli_x(1), k1);
                t.measure(stab::pauli_x(2), k2);
                base_rem_t[k1][k2] = t.remove_qubits(removed);
                sv::state s = sv::state::graph_state(g);
                s.project(stab::pauli_x(1), k1);
                s.project(stab::pauli_x(2), k2);
                base_rem_s[k1][k2] = s.remove_qubits(removed);
            }
        }
        for (const char err : {'X', 'Z'}) {
            for (int k1 = 0; k1 <= 1; ++k1) {
                for (int k2 = 0; k2 <= 1; ++k2) {
                    rec.item();
                    std::ostringstream tag;
                    tag << "X-measurement err=" << err << " branch " << k1 << k2;
                    const int clean1 = err == 'X' ? k1 : 1 - k1;
                    const pauli e = err == 'X' ? stab::pauli_x(1) : stab::pauli_z(1);
                    tableau t = tableau::graph_state(g);
                    t.apply_pauli(e);
                    t.measure(stab::pauli_x(1), k1);
                    t.measure(stab::pauli_x(2), k2);
                    const tableau tr = t.remove_qubits(removed);
                    if (!rec.require(stab::groups_equal_signed(tr, base_rem_t[clean1][k2]),
                                     tag.str() + ": leftover state is not the matching clean branch")) {
                        continue;
                    }
                    sv::state s = sv::state::graph_state(g);
                    s.apply_pauli(e);
                    s.project(stab::pauli_x(1), k1);
                    s.project(stab::pauli_x(2), k2);
                    const sv::state sr = s.remove_qubits(removed);
                    rec.require(sv::equal_up_to_phase(sr, base_rem_s[clean1][k2]),
                                tag.str() + ": amplitudes do not match the clean branch");
                }
            }
        }
    }
    // On a connected pair, Z Z acts the same as Y on either qubit.
    {
        const graph pair = chain_graph(2);
        const pauli zz{0u, 3u, 0};
        tableau t_zz = tableau::graph_state(pair);
        t_zz.apply_pauli(zz);
        sv::state s_zz = sv::state::graph_state(pair);
        s_zz.apply_pauli(zz);
        for (int q = 0; q <= 1; ++q) {
            rec.item();
            std::ostringstream tag;
            tag << "pair Z Z vs Y on qubit " << q;
            tableau t_y = tableau::graph_state(pair);
            t_y.apply_pauli(stab::pauli_y(q));
            if (!rec.require(stab::groups_equal_signed(t_zz, t_y),
                             tag.str() + ": stabilizers differ")) {
                continue;
            }
            sv::state s_y = sv::state::graph_state(pair);
            s_y.apply_pauli(stab::pauli_y(q));
            rec.require(sv::equal_up_to_phase(s_zz, s_y), tag.str() + ": amplitudes differ");
        }
    }
    return rec.res;
}

check_result check_star_complete() {
    recorder rec("star_complete");
    struct scenario {
        std::string name;
        graph g;
    };
    std::vector<scenario> scenarios;
    for (int m = 1; m <= 6; ++m) {
        scenarios.push_back({"star " + std::to_string(m), star_graph(m)});
    }
    for (int m = 1; m <= 3; ++m) {
        scenarios.push_back({"armed star " + std::to_string(m), armed_star_graph(m)});
    }
    for (const auto& sc : scenarios) {
        const int center = 0;
        const graph expected = remove_vertex(local_complement(sc.g, center), center);
        const uint32_t nb_c = compress_mask(neighbor_mask(sc.g, center), 1u << center);
        const uint32_t all_kept = expected.n >= 32 ? 0xffffffffu : ((1u << expected.n) - 1u);
        for (int k = 0; k <= 1; ++k) {
            rec.item();
            const std::string tag = sc.name + " k=" + std::to_string(k);
            tableau t = tableau::graph_state(sc.g);
            const auto r = t.measure_qubit(center, 'Y', k);
            if (!rec.require(r.random, tag + ": outcome should be a coin flip")) continue;
            const tableau tr = t.remove_qubits(1u << center);
            sv::state s = sv::state::graph_state(sc.g);
            const double p = s.project(stab::pauli_y(center), k);
            if (!rec.require(std::abs(p - 0.5) < 1e-9, tag + ": branch probability should be 1/2")) continue;
            const sv::state sr = s.remove_qubits(1u << center);
            bool matched = false;
            for (const int sign : {+1, -1}) {
                tableau te = tableau::graph_state(expected);
                sv::state se = sv::state::graph_state(expected);
                for (int q = 0; q < expected.n; ++q) {
                    if (((nb_c >> q) & 1u) == 0) continue;
                    if (sign > 0) {
                        te.apply_s(q);
                        se.apply_s(q);
                    } else {
                        te.apply_sdg(q);
                        se.apply_sdg(q);
                    }
                }
                const auto corr = stab::pauli_correction(tr, te, all_kept);
                if (!corr.has_value()) continue;
                sv::state fixed = sr;
                if ((corr->x | corr->z) != 0) fixed.apply_pauli(*corr);
                if (sv::equal_up_to_phase(fixed, se)) {
                    matched = true;
                    break;
                }
            }
            rec.require(matched, tag + ": no phase-gate dressing matches the completed graph");
        }
    }
    return rec.res;
}

std::vector<check_result> run_all(int threads) {
    std::vector<check_result> out;
    out.push_back(check_rule_xx_contraction());
    out.push_back(check_rule_z_removal());
    out.push_back(check_bell_equivalence(6, threads));
    out.push_back(check_error_propagation());
    out.push_back(check_star_complete());
    return out;
}

} // namespace apqr::checks
