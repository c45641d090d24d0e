#include "doctest.h"

#include <array>
#include <complex>

#include "stab.hpp"

using namespace apqr::stab;

namespace {

using mat2 = std::array<std::complex<double>, 4>; // row major 2x2

mat2 matrix_of(bool x, bool z) {
    const std::complex<double> i(0.0, 1.0);
    if (!x && !z) return {1, 0, 0, 1};        // I
    if (x && !z) return {0, 1, 1, 0};         // X
    if (!x && z) return {1, 0, 0, -1};        // Z
    return {0, -i, i, 0};                     // Y
}

mat2 mul(const mat2& a, const mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

mat2 scale(const mat2& a, std::complex<double> s) {
    return {a[0] * s, a[1] * s, a[2] * s, a[3] * s};
}

bool approx_equal(const mat2& a, const mat2& b) {
    for (int k = 0; k < 4; ++k) {
        if (std::abs(a[k] - b[k]) > 1e-12) return false;
    }
    return true;
}

pauli single(bool x, bool z, uint8_t phase) {
    pauli p;
    p.x = x ? 1u : 0u;
    p.z = z ? 1u : 0u;
    p.phase = phase;
    return p;
}

} // namespace

TEST_CASE("single-qubit products match the 2x2 matrix algebra") {
    const std::complex<double> i(0.0, 1.0);
    for (int ax = 0; ax < 2; ++ax)
        for (int az = 0; az < 2; ++az)
            for (int ap = 0; ap < 4; ++ap)
                for (int bx = 0; bx < 2; ++bx)
                    for (int bz = 0; bz < 2; ++bz)
                        for (int bp = 0; bp < 4; ++bp) {
                            const pauli a = single(ax, az, static_cast<uint8_t>(ap));
                            const pauli b = single(bx, bz, static_cast<uint8_t>(bp));
                            const pauli c = multiply(a, b);
                            const mat2 want = mul(
                                scale(matrix_of(ax, az), std::pow(i, ap)),
                                scale(matrix_of(bx, bz), std::pow(i, bp)));
                            const mat2 got = scale(matrix_of(c.x, c.z),
                                                   std::pow(i, c.phase));
                            CAPTURE(ax);
                            CAPTURE(az);
                            CAPTURE(ap);
                            CAPTURE(bx);
                            CAPTURE(bz);
                            CAPTURE(bp);
                            CHECK(approx_equal(got, want));
                        }
}

TEST_CASE("commutation matches bit-count parity") {
    CHECK(commutes(pauli_x(0), pauli_x(0)));
    CHECK_FALSE(commutes(pauli_x(0), pauli_z(0)));
    CHECK(commutes(pauli_x(0), pauli_z(1)));
    CHECK(commutes(multiply(pauli_x(0), pauli_x(1)),
                   multiply(pauli_z(0), pauli_z(1))));
}

TEST_CASE("parse and print round trip") {
    for (const char* s : {"+X0", "-Y1", "+Z0 Z1", "+X0 Y2 Z3", "+I"}) {
        const pauli p = parse_pauli(s, 4);
        CHECK(to_string(p, 4) == s);
    }
    CHECK(parse_pauli("Z0*Z1", 2) == parse_pauli("+Z0 Z1", 2));
    CHECK(parse_pauli("X1", 2) == pauli_x(1));
    CHECK_THROWS(parse_pauli("X9", 2));  // out of range
    CHECK_THROWS(parse_pauli("Q0", 2));  // unknown letter
    CHECK_THROWS(parse_pauli("", 2));
}

TEST_CASE("plus states and graph states have the expected stabilizers") {
    const tableau plus(2);
    CHECK(plus.group_sign(pauli_x(0)) == 0);
    CHECK(plus.group_sign(pauli_x(1)) == 0);
    CHECK_FALSE(plus.group_sign(pauli_z(0)).has_value());

    graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    const tableau bell = tableau::graph_state(g);
    // X0 Z1 and Z0 X1 stabilize the two-vertex graph state.
    CHECK(bell.group_sign(multiply(pauli_x(0), pauli_z(1))) == 0);
    CHECK(bell.group_sign(multiply(pauli_z(0), pauli_x(1))) == 0);
    // (X0 Z1)(Z0 X1) = (XZ)(ZX) per qubit = (-iY)(+iY) = +Y0 Y1.
    CHECK(bell.group_sign(multiply(pauli_y(0), pauli_y(1))) == 0);
    CHECK_FALSE(bell.group_sign(pauli_z(0)).has_value());

    graph bad;
    bad.n = 2;
    bad.edges = {{0, 2}};
    CHECK_THROWS(validate(bad));
    graph loop;
    loop.n = 2;
    loop.edges = {{1, 1}};
    CHECK_THROWS(validate(loop));
}

TEST_CASE("unitaries map stabilizers by conjugation") {
    tableau t(1); // |+>, stabilized by +X
    t.apply_s(0);  // S X Sdg = Y
    CHECK(t.group_sign(pauli_y(0)) == 0);
    t.apply_sdg(0);
    CHECK(t.group_sign(pauli_x(0)) == 0);
    t.apply_h(0); // H X H = Z
    CHECK(t.group_sign(pauli_z(0)) == 0);

    tableau u(2);
    u.apply_cz(0, 1); // CZ |++> is the two-vertex graph state
    graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    CHECK(groups_equal_signed(u, tableau::graph_state(g)));

    u.apply_pauli(pauli_z(0)); // flips the sign of X0 Z1 only
    pauli flipped = multiply(pauli_x(0), pauli_z(1));
    CHECK(u.group_sign(flipped) == 2);
}

TEST_CASE("measurement outcomes: random, deterministic, impossible") {
    tableau t(1); // |+>
    const auto r0 = t.measure_qubit(0, 'Z');
    CHECK(r0.random);
    CHECK_FALSE(r0.deterministic);
    CHECK(r0.outcome == 0); // default branch
    const auto r1 = t.measure_qubit(0, 'Z');
    CHECK(r1.deterministic);
    CHECK(r1.outcome == 0);

    const auto forced = t.measure_qubit(0, 'Z', 1);
    CHECK(forced.impossible); // |0> cannot yield -1 for Z
    CHECK(t.group_sign(pauli_z(0)) == 0); // state unchanged

    tableau u(1);
    const auto rminus = u.measure_qubit(0, 'Z', 1);
    CHECK(rminus.random);
    CHECK(rminus.outcome == 1);
    CHECK(u.group_sign(pauli_z(0)) == 2); // now |1>
}

TEST_CASE("measuring a stabilizer of the state is deterministic") {
    graph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}};
    tableau t = tableau::graph_state(g);
    const pauli stab = multiply(pauli_z(0), multiply(pauli_x(1), pauli_z(2)));
    const auto r = t.measure(stab);
    CHECK(r.deterministic);
    CHECK(r.outcome == 0);
}

TEST_CASE("qubit removal factors product states") {
    // Star graph on {0,1}: Z-measuring qubit 1 leaves it in a computational
    // state entangled with nothing; removing it must keep qubit 0 intact.
    graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    tableau t = tableau::graph_state(g);
    t.measure_qubit(1, 'Z', 0);
    const tableau rest = t.remove_qubits(1u << 1);
    CHECK(rest.num_qubits() == 1);
    CHECK(rest.group_sign(pauli_x(0)) == 0); // Z1=+1 branch leaves |+>

    // The other branch leaves |->.
    tableau t1 = tableau::graph_state(g);
    t1.measure_qubit(1, 'Z', 1);
    const tableau rest1 = t1.remove_qubits(1u << 1);
    CHECK(rest1.group_sign(pauli_x(0)) == 2);
}

TEST_CASE("qubit removal refuses entangled cuts") {
    graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    const tableau bell = tableau::graph_state(g);
    CHECK_THROWS(bell.remove_qubits(1u << 1));
}

TEST_CASE("x measurement splits a path into a bell pair") {
    // Path 0-1-2; X-measuring the middle vertex leaves the ends maximally
    // entangled: {X X, Z Z} on the +1 branch. Removal relabels qubit 2 -> 1.
    tableau want(2); // |++> -> CZ -> H(1) gives stabilizers {X0 X1, Z0 Z1}
    want.apply_cz(0, 1);
    want.apply_h(1);

    graph path;
    path.n = 3;
    path.edges = {{0, 1}, {1, 2}};

    tableau t = tableau::graph_state(path);
    const auto m = t.measure_qubit(1, 'X', 0);
    CHECK(m.random);
    const tableau rest = t.remove_qubits(1u << 1);
    REQUIRE(rest.num_qubits() == 2);
    CHECK(groups_equal_signed(rest, want));

    // The -1 branch differs by a Pauli frame: {X X, -Z Z}.
    tableau t1 = tableau::graph_state(path);
    t1.measure_qubit(1, 'X', 1);
    const tableau rest1 = t1.remove_qubits(1u << 1);
    CHECK(groups_equal_unsigned(rest1, want));
    CHECK_FALSE(groups_equal_signed(rest1, want));
    const auto corr = pauli_correction(rest1, want, 0b11u);
    REQUIRE(corr.has_value());
    tableau fixed = rest1;
    fixed.apply_pauli(*corr);
    CHECK(groups_equal_signed(fixed, want));
}

TEST_CASE("canonical forms decide group equality") {
    graph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}};
    tableau a = tableau::graph_state(g);
    tableau b = tableau::graph_state(g);
    // Multiply one generator into another: same group, different list.
    CHECK(canonical_form(a) == canonical_form(b));
    CHECK(groups_equal_signed(a, b));

    b.apply_pauli(pauli_z(0));
    CHECK(groups_equal_unsigned(a, b));
    CHECK_FALSE(groups_equal_signed(a, b));
    CHECK(canonical_form(a) != canonical_form(b));
}

TEST_CASE("correction search respects the allowed support") {
    graph g;
    g.n = 2;
    g.edges = {{0, 1}};
    tableau a = tableau::graph_state(g);
    tableau b = tableau::graph_state(g);
    b.apply_pauli(pauli_z(1)); // flips X0 Z1 -> -X0 Z1

    const auto on_both = pauli_correction(a, b, 0b11u);
    REQUIRE(on_both.has_value());
    tableau fixed = a;
    fixed.apply_pauli(*on_both);
    CHECK(groups_equal_signed(fixed, b));

    // A sign flip carried by qubit 1 alone cannot always be undone on 0:
    // here it can (Z1's flip equals Z0's on this state), so check a case
    // where the unsigned groups differ instead.
    tableau c(2);
    CHECK_FALSE(pauli_correction(a, c, 0b11u).has_value());
}

TEST_CASE("tableau size limits") {
    CHECK_THROWS(tableau(max_tableau_qubits + 1));
    CHECK_THROWS(tableau(0));
    const tableau big(max_tableau_qubits);
    CHECK(big.num_qubits() == max_tableau_qubits);
}
