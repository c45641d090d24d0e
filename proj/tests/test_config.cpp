#include "doctest.h"

#include <string>

#include "config.hpp"

using namespace apqr::cfg;

namespace {

// Parsing must fail with a diagnostic anchored at the given dotted path.
void expect_error(const std::string& text, const std::string& path) {
    try {
        parse(text);
        FAIL_CHECK("expected config_error for " << path << " in " << text);
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CAPTURE(msg);
        CHECK(msg.rfind(path + ":", 0) == 0);
    }
}

const char* full_config = R"({
  "hardware": {
    "eta_source": 0.95, "eta_detector": 1.0, "tau_a_s": 1.5e-7,
    "source_rate_hz": 1e5, "c_m_per_s": 2e8, "att_length_km": 22.0
  },
  "link": {"length_km": 1000.0, "spacing_km": 4.0, "depolarizing_error": 4.2e-5},
  "protocol": {"m": 19, "branches": [11, 11, 1], "prep_poly": [0.0, 2.0, 1.0]},
  "search": {
    "m": [17, 21], "branches": [[9, 13], [9, 13], [1, 2]],
    "min_fidelity": 0.9, "min_rate_hz": 1.0, "max_epsilon0": 0.3,
    "grid": [{"length_km": 500.0, "spacing_km": 4.0},
             {"length_km": 1000.0, "spacing_km": 4.0, "depolarizing_error": 8.4e-5}]
  },
  "mc": {
    "trials": 1000, "seed": 7, "confidence_sigma": 3.0, "repeater": true,
    "physical_trials": 10,
    "tree_suite": [
      {"branches": [2, 2], "epsilon0": 0.3, "e_m": 0.01, "basis": "x",
       "trials": 500, "expected_success": 0.5, "expected_error": 0.01}
    ]
  },
  "output": {"format": "csv", "path": "out.csv"}
})";

} // namespace

TEST_CASE("full configuration parses into every section") {
    const run_config rc = parse(full_config);

    REQUIRE(rc.hardware.has_value());
    CHECK(rc.hardware->eta_s == 0.95);
    CHECK(rc.hardware->eta_d == 1.0);
    CHECK(rc.hardware->tau_a == 1.5e-7);
    CHECK(rc.hardware->source_rate_hz == 1e5);
    CHECK(rc.hardware->c == 2e8);
    CHECK(rc.hardware->l_att_km == 22.0);

    REQUIRE(rc.link.has_value());
    CHECK(rc.link->l_km == 1000.0);
    CHECK(rc.link->l0_km == 4.0);
    CHECK(rc.link->e_d == 4.2e-5);

    REQUIRE(rc.protocol.has_value());
    CHECK(rc.protocol->m == 19);
    CHECK(rc.protocol->tree.branches == std::vector<int>{11, 11, 1});
    CHECK(rc.prep_poly.coeffs == std::vector<double>{0.0, 2.0, 1.0});

    REQUIRE(rc.search.has_value());
    CHECK(rc.search->space.m_range.lo == 17);
    CHECK(rc.search->space.m_range.hi == 21);
    REQUIRE(rc.search->space.branch_ranges.size() == 3);
    CHECK(rc.search->space.branch_ranges[0].lo == 9);
    CHECK(rc.search->space.branch_ranges[2].hi == 2);
    CHECK(rc.search->space.cons.min_fidelity == 0.9);
    CHECK(rc.search->space.cons.min_rate_hz == 1.0);
    CHECK(rc.search->space.cons.max_epsilon0 == 0.3);
    REQUIRE(rc.search->grid.size() == 2);
    CHECK(rc.search->grid[0].l_km == 500.0);
    CHECK_FALSE(rc.search->grid[0].e_d.has_value());
    CHECK(rc.search->grid[1].e_d == 8.4e-5);

    REQUIRE(rc.mc.has_value());
    CHECK(rc.mc->trials == 1000);
    CHECK(rc.mc->seed == 7);
    CHECK(rc.mc->repeater);
    CHECK(rc.mc->physical_trials == 10);
    REQUIRE(rc.mc->tree_suite.size() == 1);
    const mc_tree_case& c = rc.mc->tree_suite[0];
    CHECK(c.tree.branches == std::vector<int>{2, 2});
    CHECK(c.epsilon0 == 0.3);
    CHECK(c.e_m == 0.01);
    CHECK(c.basis == apqr::mc::basis::x);
    CHECK(c.trials == 500);
    CHECK(c.expected_success == 0.5);
    CHECK(c.expected_error == 0.01);

    CHECK(rc.output.format == "csv");
    CHECK(rc.output.path == "out.csv");
}

TEST_CASE("defaults") {
    const run_config rc = parse("{}");
    CHECK_FALSE(rc.hardware.has_value());
    CHECK_FALSE(rc.link.has_value());
    CHECK_FALSE(rc.protocol.has_value());
    CHECK_FALSE(rc.search.has_value());
    CHECK_FALSE(rc.mc.has_value());
    CHECK(rc.output.format == "json");
    CHECK(rc.output.path.empty());
    // Identity retry polynomial.
    CHECK(rc.prep_poly.coeffs == std::vector<double>{0.0, 1.0});

    // Optional hardware fields fall back to their defaults.
    const run_config hw = parse(
        R"({"hardware": {"eta_source": 0.9, "eta_detector": 0.9, "tau_a_s": 0.0}})");
    REQUIRE(hw.hardware.has_value());
    CHECK(hw.hardware->source_rate_hz == 1e5);
    CHECK(hw.hardware->c == 2e8);
    CHECK(hw.hardware->l_att_km == 22.0);

    const run_config mc = parse(R"({"mc": {}})");
    REQUIRE(mc.mc.has_value());
    CHECK(mc.mc->trials == 100000);
    CHECK(mc.mc->seed == 1);
    CHECK(mc.mc->confidence_sigma == 3.0);
    CHECK_FALSE(mc.mc->repeater);
    CHECK(mc.mc->physical_trials == 0);
    CHECK(mc.mc->tree_suite.empty());
}

TEST_CASE("malformed json and top-level shape") {
    CHECK_THROWS_AS(parse("{"), config_error);
    CHECK_THROWS_AS(parse(""), config_error);
    expect_error(R"([1, 2])", "config");
    expect_error(R"({"bogus": 1})", "bogus");
    expect_error(R"({"hardware": 5})", "hardware");
}

TEST_CASE("hardware rejections carry dotted paths") {
    expect_error(R"({"hardware": {"eta_detector": 1.0, "tau_a_s": 0.0}})",
                 "hardware.eta_source");
    expect_error(
        R"({"hardware": {"eta_source": 1.5, "eta_detector": 1.0, "tau_a_s": 0.0}})",
        "hardware.eta_source");
    expect_error(
        R"({"hardware": {"eta_source": 0.9, "eta_detector": 0.9, "tau_a_s": -1.0}})",
        "hardware.tau_a_s");
    expect_error(R"({"hardware": {"eta_source": 0.9, "eta_detector": 0.9,
                                  "tau_a_s": 0.0, "source_rate_hz": 0.0}})",
                 "hardware.source_rate_hz");
    expect_error(R"({"hardware": {"eta_source": 0.9, "eta_detector": 0.9,
                                  "tau_a_s": 0.0, "lat": 1}})",
                 "hardware.lat");
    expect_error(R"({"hardware": {"eta_source": "x", "eta_detector": 0.9,
                                  "tau_a_s": 0.0}})",
                 "hardware.eta_source");
}

TEST_CASE("link rejections") {
    expect_error(R"({"link": {"spacing_km": 4.0, "depolarizing_error": 0.0}})",
                 "link.length_km");
    expect_error(
        R"({"link": {"length_km": 2.0, "spacing_km": 4.0, "depolarizing_error": 0.0}})",
        "link.spacing_km");
    expect_error(R"({"link": {"length_km": 100.0, "spacing_km": 4.0,
                              "depolarizing_error": 0.9}})",
                 "link.depolarizing_error");
}

TEST_CASE("protocol rejections") {
    expect_error(R"({"protocol": {"branches": [2, 2]}})", "protocol.m");
    expect_error(R"({"protocol": {"m": 0, "branches": [2, 2]}})", "protocol.m");
    expect_error(R"({"protocol": {"m": 2, "branches": []}})", "protocol.branches");
    expect_error(R"({"protocol": {"m": 2, "branches": [2, 0]}})",
                 "protocol.branches[1]");
    expect_error(R"({"protocol": {"m": 2, "branches": [2.5]}})",
                 "protocol.branches[0]");
    expect_error(R"({"protocol": {"m": 2, "branches": [2], "prep_poly": []}})",
                 "protocol.prep_poly");
    expect_error(R"({"protocol": {"m": 2, "branches": [2], "prep_poly": [-1.0]}})",
                 "protocol.prep_poly[0]");
}

TEST_CASE("search rejections") {
    expect_error(R"({"search": {"branches": [[1, 2]]}})", "search.m");
    expect_error(R"({"search": {"m": [2, 1], "branches": [[1, 2]]}})", "search.m");
    expect_error(R"({"search": {"m": [1], "branches": [[1, 2]]}})", "search.m");
    expect_error(R"({"search": {"m": [1, 2], "branches": []}})", "search.branches");
    expect_error(R"({"search": {"m": [1, 2], "branches": [[0, 2]]}})",
                 "search.branches[0]");
    expect_error(R"({"search": {"m": [1, 2], "branches": [[1, 2]],
                                "min_fidelity": 1.5}})",
                 "search.min_fidelity");
    expect_error(R"({"search": {"m": [1, 2], "branches": [[1, 2]],
                                "max_epsilon0": 0.6}})",
                 "search.max_epsilon0");
    expect_error(R"({"search": {"m": [1, 2], "branches": [[1, 2]], "grid": []}})",
                 "search.grid");
    expect_error(R"({"search": {"m": [1, 2], "branches": [[1, 2]],
                                "grid": [{"length_km": 10.0}]}})",
                 "search.grid[0].spacing_km");
}

TEST_CASE("mc rejections") {
    expect_error(R"({"mc": {"trials": 0}})", "mc.trials");
    expect_error(R"({"mc": {"trials": -5}})", "mc.trials");
    expect_error(R"({"mc": {"tree_suite": [{"epsilon0": 0.3, "e_m": 0.0}]}})",
                 "mc.tree_suite[0].branches");
    expect_error(R"({"mc": {"tree_suite": [{"branches": [2], "epsilon0": 1.0,
                                            "e_m": 0.0}]}})",
                 "mc.tree_suite[0].epsilon0");
    expect_error(R"({"mc": {"tree_suite": [{"branches": [2], "epsilon0": 0.3,
                                            "e_m": 0.0, "basis": "y"}]}})",
                 "mc.tree_suite[0].basis");
}

TEST_CASE("output rejections") {
    expect_error(R"({"output": {"format": "xml"}})", "output.format");
    expect_error(R"({"output": {"path": 5}})", "output.path");
}

TEST_CASE("overrides") {
    const overrides none = parse_overrides("");
    CHECK_FALSE(none.trials.has_value());
    CHECK_FALSE(none.seed.has_value());
    CHECK_FALSE(none.threads.has_value());
    CHECK_FALSE(none.format.has_value());

    const overrides null = parse_overrides("null");
    CHECK_FALSE(null.trials.has_value());

    const overrides all =
        parse_overrides(R"({"trials": 5, "seed": 2, "threads": 3, "format": "csv"})");
    CHECK(all.trials == 5);
    CHECK(all.seed == 2);
    CHECK(all.threads == 3);
    CHECK(all.format == "csv");

    CHECK_THROWS_AS(parse_overrides(R"({"trials": 0})"), config_error);
    CHECK_THROWS_AS(parse_overrides(R"({"threads": -1})"), config_error);
    CHECK_THROWS_AS(parse_overrides(R"({"threads": 5000})"), config_error);
    CHECK_THROWS_AS(parse_overrides(R"({"format": "yaml"})"), config_error);
    CHECK_THROWS_AS(parse_overrides(R"({"bogus": 1})"), config_error);
    CHECK_THROWS_AS(parse_overrides("["), config_error);
}
