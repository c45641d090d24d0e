#include "doctest.h"

#include <cmath>

#include "tree.hpp"

using apqr::tree::tree_params;

namespace {

constexpr double tight = 1e-13; // relative
constexpr double complement_tol = 1e-9;

void check_rel(double got, double want, double tol = tight) {
    if (want == 0.0) {
        CHECK(std::abs(got) <= tol);
    } else {
        CHECK(std::abs(got - want) <= tol * std::abs(want));
    }
}

} // namespace

TEST_CASE("branch vector validation") {
    CHECK_THROWS(apqr::tree::validate(tree_params{{}}));
    CHECK_THROWS(apqr::tree::validate(tree_params{{0}}));
    CHECK_THROWS(apqr::tree::validate(tree_params{{4, -1}}));
    CHECK_NOTHROW(apqr::tree::validate(tree_params{{1}}));
    CHECK_NOTHROW(apqr::tree::validate(tree_params{{16, 14, 1}}));
}

TEST_CASE("photon counts per encoded qubit") {
    CHECK(apqr::tree::tree_qubit_count(tree_params{{1}}) == 1);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{1, 1}}) == 2);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{2, 2}}) == 6);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{4, 4, 1}}) == 36);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{16, 14, 1}}) == 464);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{11, 11, 1}}) == 253);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{17, 28, 2}}) == 1445);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{12, 23, 2}}) == 840);
    CHECK(apqr::tree::tree_qubit_count(tree_params{{10, 20, 2}}) == 610);
    CHECK_THROWS_AS(apqr::tree::tree_qubit_count(tree_params{std::vector<int>(22, 1000)}),
                    std::overflow_error);
}

TEST_CASE("indirect success profile for the 5000 km working tree") {
    const tree_params t{{16, 14, 1}};
    const double eps = 0.1987061359887503;
    const auto r = apqr::tree::indirect_success_profile(t, eps);
    REQUIRE(r.size() == 4);
    check_rel(r[0], 0.9999409732127629);
    check_rel(r[1], 0.9999994335757091);
    check_rel(r[2], 0.8012938640112497);
    CHECK(r[3] == 0.0);
}

TEST_CASE("loss-tolerant success probabilities, small trees") {
    const tree_params t22{{2, 2}};
    check_rel(apqr::tree::loss_tolerant_success_z(t22, 0.2), 0.9840639999999999);
    check_rel(apqr::tree::loss_tolerant_success_x(t22, 0.2), 0.7618560000000001);
    check_rel(apqr::tree::loss_tolerant_success_general(t22, 0.2), 0.6062080000000001);

    const tree_params t441{{4, 4, 1}};
    check_rel(apqr::tree::loss_tolerant_success_z(t441, 0.3), 0.9212557867086935);
    check_rel(apqr::tree::loss_tolerant_success_x(t441, 0.3), 0.9268977462641201);
    check_rel(apqr::tree::loss_tolerant_success_general(t441, 0.3), 0.6275535666838524);

    const tree_params t11{{1, 1}};
    check_rel(apqr::tree::loss_tolerant_success_z(t11, 0.2), 0.9600000000000001);
    check_rel(apqr::tree::loss_tolerant_success_x(t11, 0.2), 0.6400000000000001);
    check_rel(apqr::tree::loss_tolerant_success_general(t11, 0.2), 0.6400000000000001);
}

TEST_CASE("success complements stay accurate in the near-one regime") {
    const tree_params t{{16, 14, 1}};
    const double eps = 0.1987061359887503;
    const auto m = apqr::tree::analyze(t, eps, 0.0);
    // Direct subtraction would lose most digits here; the dedicated
    // complements must agree with high-precision references.
    CHECK(std::abs(m.one_minus_p_z - 1.800830194742531e-06) <=
          complement_tol * 1.800830194742531e-06);
    CHECK(std::abs(m.one_minus_p_x - 5.90267872371264e-05) <=
          complement_tol * 5.90267872371264e-05);
    check_rel(m.one_minus_p_general, 0.43106473346112617);
    check_rel(m.p_general, 0.5689352665388738);
}

TEST_CASE("measurement flip rate from depolarizing weight") {
    check_rel(apqr::tree::measurement_error_from_depolarizing(4.2e-5),
              2.7999999999999996e-05);
    CHECK(apqr::tree::measurement_error_from_depolarizing(0.0) == 0.0);
}

TEST_CASE("logical error rates, working trees") {
    const double em1 = 2.7999999999999996e-05;

    const tree_params t1{{16, 14, 1}};
    const double eps1 = 0.1987061359887503;
    const auto ez1 = apqr::tree::loss_tolerant_error_z(t1, eps1, em1);
    const auto ex1 = apqr::tree::loss_tolerant_error_x(t1, eps1, em1);
    REQUIRE(ez1.has_value());
    REQUIRE(ex1.has_value());
    check_rel(*ez1, 1.6262602616249576e-07);
    check_rel(*ex1, 2.4583799955954248e-06);

    const auto prof1 = apqr::tree::indirect_error_profile(t1, eps1, em1);
    REQUIRE(prof1.size() == 3);
    REQUIRE(prof1[0].has_value());
    REQUIRE(prof1[1].has_value());
    REQUIRE(prof1[2].has_value());
    check_rel(*prof1[0], 2.4583799955954248e-06);
    check_rel(*prof1[1], 1.015142434281295e-08);
    check_rel(*prof1[2], 2.799999999997249e-05);

    const tree_params t2{{11, 11, 1}};
    const double eps2 = 0.1973659159731317;
    check_rel(*apqr::tree::loss_tolerant_error_z(t2, eps2, em1), 1.4342793252548661e-06);
    check_rel(*apqr::tree::loss_tolerant_error_x(t2, eps2, em1), 8.272625717858572e-06);

    const double em2 = 5.599999999999999e-05;
    const tree_params t3{{17, 28, 2}};
    const double eps3 = 0.27058677893662864;
    check_rel(*apqr::tree::loss_tolerant_error_z(t3, eps3, em2), 5.236452210441945e-07);
    check_rel(*apqr::tree::loss_tolerant_error_x(t3, eps3, em2), 1.4635884940097365e-05);

    const tree_params t4{{12, 23, 2}};
    const double eps4 = 0.26944316134361446;
    check_rel(*apqr::tree::loss_tolerant_error_z(t4, eps4, em2), 2.7863108981183295e-06);
    check_rel(*apqr::tree::loss_tolerant_error_x(t4, eps4, em2), 4.662998614301461e-05);
}

TEST_CASE("logical error rates, small-tree grid") {
    struct row {
        std::vector<int> b;
        double eps, em, ez, ex;
    };
    const row rows[] = {
        {{2, 2}, 0.2, 1e-3, 0.0019979999999999998, 0.002994003999999994},
        {{2, 2}, 0.3, 1e-2, 0.01980000000000004, 0.029404000000000038},
        {{4, 4, 1}, 0.2, 1e-3, 0.003582285258621139, 0.0019289598717303405},
        {{4, 4, 1}, 0.3, 1e-3, 0.005363743721632505, 0.003481377913174317},
        {{4, 4, 1}, 0.3, 1e-2, 0.05245351752495067, 0.035411588029221897},
        {{4, 4, 1}, 0.4, 1e-2, 0.061067433762659766, 0.04352830987536122},
        {{1, 1}, 0.3, 1e-3, 0.0010000000000000009, 0.0019979999999999993},
    };
    for (const row& r : rows) {
        CAPTURE(r.eps);
        CAPTURE(r.em);
        const tree_params t{r.b};
        const auto ez = apqr::tree::loss_tolerant_error_z(t, r.eps, r.em);
        const auto ex = apqr::tree::loss_tolerant_error_x(t, r.eps, r.em);
        REQUIRE(ez.has_value());
        REQUIRE(ex.has_value());
        check_rel(*ez, r.ez);
        check_rel(*ex, r.ex);
    }
}

TEST_CASE("zero measurement error gives zero logical error") {
    const tree_params t{{4, 4, 1}};
    const auto ez = apqr::tree::loss_tolerant_error_z(t, 0.3, 0.0);
    REQUIRE(ez.has_value());
    CHECK(*ez == 0.0);
}

TEST_CASE("error rates undefined where indirect success vanishes") {
    // A bare chain {1} at full loss of the next level: R_0 can reach zero at
    // epsilon0 = 1 boundary values; probe via profile entries beyond depth.
    const tree_params t{{1}};
    const auto prof = apqr::tree::indirect_error_profile(t, 0.0, 1e-3);
    REQUIRE(prof.size() == 1);
    CHECK(prof[0].has_value());
}

TEST_CASE("analyze bundles the individual quantities consistently") {
    const tree_params t{{10, 20, 2}};
    const double eps = 0.2513080124952062;
    const double em = 0.00020533333333333333;
    const auto m = apqr::tree::analyze(t, eps, em);
    CHECK(m.q_l == 610);
    check_rel(m.p_z, apqr::tree::loss_tolerant_success_z(t, eps));
    check_rel(m.p_x, apqr::tree::loss_tolerant_success_x(t, eps));
    check_rel(m.p_general, apqr::tree::loss_tolerant_success_general(t, eps));
    REQUIRE(m.e_z.has_value());
    REQUIRE(m.e_x.has_value());
    check_rel(*m.e_z, 1.3563279278099182e-05);
    check_rel(*m.e_x, 0.00014137772328301737);
    CHECK(std::abs(m.one_minus_p_z - 4.717087833450151e-05) <=
          complement_tol * 4.717087833450151e-05);
    CHECK(std::abs(m.one_minus_p_x - 0.00039151334424636364) <=
          complement_tol * 0.00039151334424636364);
    check_rel(m.one_minus_p_general, 0.27386909054284214);
    // The profiles carry matching complements.
    REQUIRE(m.r_profile.size() == m.r_complement.size());
    for (size_t k = 0; k < m.r_profile.size(); ++k) {
        CHECK(std::abs(m.r_profile[k] + m.r_complement[k] - 1.0) <= 1e-12);
    }
}

TEST_CASE("deep majority votes reject branch counts above the exact-comb cap") {
    tree_params t{{70, 70, 1}};
    CHECK_THROWS(apqr::tree::indirect_error_profile(t, 0.2, 1e-3));
    CHECK_NOTHROW(apqr::tree::loss_tolerant_success_z(t, 0.2));
}
