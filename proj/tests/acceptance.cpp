// Acceptance gate for the repeater performance model.
//
// Runs ten end-to-end checks against published reference numbers and the
// model's own cross-validation machinery, printing exactly one PASS/FAIL
// line per criterion. The exit code is the number of failed criteria.
// Tolerances are pinned next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "config.hpp"
#include "json.hpp"
#include "repeater.hpp"
#include "runner.hpp"

using nlohmann::json;

namespace {

struct criterion_result {
    bool pass = true;
    std::string detail; // first few failures, or a short success note
};

// Collects named sub-checks; the first failures become the FAIL detail.
class gate {
  public:
    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass_ = false;
        if (fail_count_ < 4) {
            if (!detail_.empty()) detail_ += "; ";
            detail_ += what;
        }
        ++fail_count_;
    }

    void require_rel(double got, double want, double rel, const std::string& name) {
        std::ostringstream ss;
        ss << name << "=" << got << " not within " << rel * 100 << "% of " << want;
        require(std::abs(got - want) <= rel * std::abs(want), ss.str());
    }

    void require_abs(double got, double want, double abs_tol, const std::string& name) {
        std::ostringstream ss;
        ss << name << "=" << got << " not within " << abs_tol << " of " << want;
        require(std::abs(got - want) <= abs_tol, ss.str());
    }

    void require_range(double got, double lo, double hi, const std::string& name) {
        std::ostringstream ss;
        ss << name << "=" << got << " outside [" << lo << ", " << hi << "]";
        require(got >= lo && got <= hi, ss.str());
    }

    criterion_result result(const std::string& ok_note) const {
        criterion_result r;
        r.pass = pass_;
        r.detail = pass_ ? ok_note : detail_;
        return r;
    }

  private:
    bool pass_ = true;
    int fail_count_ = 0;
    std::string detail_;
};

std::string preset_path(const char* name) {
    return std::string(APQR_PRESET_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

apqr::cfg::run_config load_preset(const char* name) {
    return apqr::cfg::parse(slurp(preset_path(name)));
}

apqr::model::evaluation eval_preset(const char* name) {
    const auto rc = load_preset(name);
    apqr::model::config cfg;
    cfg.hw = rc.hardware.value();
    cfg.link = rc.link.value();
    cfg.proto = rc.protocol.value();
    return apqr::model::evaluate(cfg);
}

// Reference values for the loss-tolerant measurement of one encoded qubit:
// failure probabilities for Z / X / arbitrary-basis readout and the residual
// error rates of the Z and X readouts.
struct tree_reference {
    const char* preset;
    double one_minus_p_z, one_minus_p_x, one_minus_p_general;
    double e_z_bar, e_x_bar;
};

void check_tree_column(gate& g, const tree_reference& ref, double eps_lo,
                       double eps_hi) {
    constexpr double rel = 0.10; // absorbs two-significant-figure rounding
    const auto ev = eval_preset(ref.preset);
    const std::string tag = std::string(ref.preset) + ":";
    g.require_range(ev.epsilon0, eps_lo, eps_hi, tag + "epsilon0");
    g.require_rel(ev.one_minus_p_z, ref.one_minus_p_z, rel, tag + "1-p_z");
    g.require_rel(ev.one_minus_p_x, ref.one_minus_p_x, rel, tag + "1-p_x");
    g.require_rel(ev.one_minus_p_general, ref.one_minus_p_general, rel,
                  tag + "1-p_general");
    g.require_rel(ev.e_z_bar, ref.e_z_bar, rel, tag + "e_z_bar");
    g.require_rel(ev.e_x_bar, ref.e_x_bar, rel, tag + "e_x_bar");
}

criterion_result criterion_1_tree_narrow() {
    gate g;
    check_tree_column(g, {"profile_a_5000km.json", 1.8e-6, 5.9e-5, 0.43, 1.6e-7, 2.5e-6},
                      0.195, 0.205);
    check_tree_column(g, {"profile_a_1000km.json", 2.5e-5, 3.2e-4, 0.35, 1.4e-6, 8.3e-6},
                      0.195, 0.205);
    return g.result("both 4 km-spacing tree columns within 10%");
}

criterion_result criterion_2_tree_wide() {
    gate g;
    check_tree_column(g, {"profile_b_5000km.json", 4.9e-6, 1.1e-4, 0.43, 5.2e-7, 1.5e-5},
                      0.265, 0.275);
    check_tree_column(g, {"profile_b_1000km.json", 3.7e-5, 5.6e-4, 0.37, 2.8e-6, 4.7e-5},
                      0.265, 0.275);
    return g.result("both 8 km-spacing tree columns within 10%");
}

criterion_result criterion_3_narrow_end_to_end() {
    gate g;
    const auto far = eval_preset("profile_a_5000km.json");
    g.require_abs(far.p, 0.69, 0.01, "5000km:p");
    g.require_abs(far.rate_hz / 1e3, 69.0, 1.0, "5000km:rate_khz");
    g.require_rel(far.q_bar, 4.0e7, 0.03, "5000km:q_bar");
    g.require_rel(far.errors.e_z, 3.5e-2, 0.05, "5000km:e_z");
    g.require_rel(far.errors.e_x, 3.5e-2, 0.05, "5000km:e_x");
    g.require_range(far.errors.e_y, 0.030, 0.045, "5000km:e_y");
    g.require_range(far.errors.fidelity, 0.88, 0.91, "5000km:fidelity");

    const auto near = eval_preset("profile_a_1000km.json");
    g.require_abs(near.p, 0.58, 0.01, "1000km:p");
    g.require_abs(near.rate_hz / 1e3, 58.0, 1.0, "1000km:rate_khz");
    g.require_rel(near.q_bar, 4.1e6, 0.03, "1000km:q_bar");
    g.require_rel(near.errors.e_z, 8.9e-3, 0.05, "1000km:e_z");
    g.require_rel(near.errors.e_x, 8.9e-3, 0.05, "1000km:e_x");
    g.require_range(near.errors.fidelity, 0.96, 0.98, "1000km:fidelity");
    return g.result("success, rate, cost, and error rates at both distances");
}

criterion_result criterion_4_wide_end_to_end() {
    gate g;
    const auto far = eval_preset("profile_b_5000km.json");
    g.require_rel(far.q_bar, 7.6e7, 0.03, "5000km:q_bar");
    g.require_abs(far.p, 0.65, 0.01, "5000km:p");
    const auto near = eval_preset("profile_b_1000km.json");
    g.require_rel(near.q_bar, 7.3e6, 0.03, "1000km:q_bar");
    g.require_abs(near.p, 0.60, 0.01, "1000km:p");
    return g.result("cost and success at both distances");
}

criterion_result criterion_5_benchmark() {
    gate g;
    const auto ev = eval_preset("benchmark_800km.json");
    g.require_range(ev.epsilon0, 0.245, 0.255, "epsilon0");
    g.require(ev.photons_per_node_per_trial == 24440,
              "photons_per_node_per_trial != 24440");
    g.require_rel(ev.q_bar, 5.3e6, 0.03, "q_bar");
    g.require_abs(ev.p, 0.60, 0.01, "p");
    g.require_abs(ev.rate_hz / 1e3, 60.0, 1.0, "rate_khz");
    g.require_rel(ev.errors.e_z, 0.041, 0.10, "e_z");
    g.require_rel(ev.errors.e_x, 0.041, 0.10, "e_x");
    return g.result("800 km benchmark point reproduced");
}

criterion_result criterion_6_direct_transmission() {
    gate g;
    constexpr double year_s = 365.25 * 24 * 3600;
    const auto far = apqr::model::direct_transmission_cost(5000.0, 1e10, 22.0);
    g.require_range(far.photons / 5.1e98, 0.5, 2.0, "5000km:photons factor");
    g.require_range(far.seconds / year_s / 1e81, 0.5, 2.0, "5000km:years factor");
    const auto near = apqr::model::direct_transmission_cost(1000.0, 1e10, 22.0);
    g.require_rel(near.photons, 5.5e19, 0.10, "1000km:photons");
    g.require_rel(near.seconds / year_s, 175.0, 0.10, "1000km:years");
    return g.result("no-repeater baseline at both distances");
}

criterion_result criterion_7_memory_time() {
    gate g;
    const double t_ms = 1e3 * apqr::model::memory_time(
                                  apqr::model::memory_strategy::b, 1000.0, 4.0,
                                  2e8, 150e-9);
    g.require_range(t_ms, 9.9, 10.1, "t_mem_b_ms");
    return g.result("round-trip memory-time equivalent is 10 ms");
}

criterion_result criterion_8_monte_carlo() {
    gate g;
    const auto start = std::chrono::steady_clock::now();

    // Small-tree suite: every analytic success/error rate within 3 sigma.
    const auto suite = apqr::run::run(load_preset("mc_small_trees.json"), "mc", {});
    g.require(suite.code == apqr::run::exit_ok,
              "small-tree suite exited " + std::to_string(suite.code));
    if (suite.code == apqr::run::exit_ok) {
        const json doc = json::parse(suite.document);
        const json& res = doc.at("results");
        g.require(res.at("tree").size() == 54, "expected 54 suite rows");
        g.require(res.at("all_consistent") == true, "suite not all consistent");
    }

    // Full-chain replay at 1000 km: success probability and error rates
    // agree with the closed forms.
    const auto chain = apqr::run::run(load_preset("profile_a_1000km.json"), "mc", {});
    g.require(chain.code == apqr::run::exit_ok,
              "chain replay exited " + std::to_string(chain.code));
    if (chain.code == apqr::run::exit_ok) {
        const json doc = json::parse(chain.document);
        bool saw_p = false, saw_e_z = false;
        for (const json& q : doc.at("results").at("repeater").at("quantities")) {
            if (q.at("quantity") == "p") {
                saw_p = true;
                g.require(q.at("verdict") == "consistent", "p verdict");
            }
            if (q.at("quantity") == "e_z") {
                saw_e_z = true;
                g.require(q.at("verdict") == "consistent", "e_z verdict");
            }
        }
        g.require(saw_p && saw_e_z, "missing p / e_z quantities");
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    {
        std::ostringstream ss;
        ss << "runtime " << elapsed << "s over 300s budget";
        g.require(elapsed < 300.0, ss.str());
    }
    std::ostringstream note;
    note << "54 tree rows + chain replay consistent in " << static_cast<int>(elapsed)
         << "s";
    return g.result(note.str());
}

criterion_result criterion_9_measurement_rules() {
    gate g;
    long cases = 0;
    for (const auto& r : apqr::checks::run_all(0)) {
        g.require(r.pass, r.name + ": " + r.detail);
        cases += r.cases;
    }
    std::ostringstream note;
    note << "all rule checks pass (" << cases << " cases)";
    return g.result(note.str());
}

criterion_result criterion_10_polynomial_scaling() {
    gate g;
    const auto out = apqr::run::run(load_preset("sweep_scaling.json"), "sweep", {});
    g.require(out.code == apqr::run::exit_ok,
              "sweep exited " + std::to_string(out.code));
    double slope = 0.0;
    if (out.code == apqr::run::exit_ok) {
        const json doc = json::parse(out.document);
        std::vector<double> xs, ys;
        for (const json& row : doc.at("results").at("rows")) {
            g.require(row.at("found") == true, "row without a feasible optimum");
            if (row.at("found") != true) continue;
            xs.push_back(std::log(row.at("length_km").get<double>()));
            ys.push_back(std::log(row.at("best").at("metrics").at("q_bar").get<double>()));
        }
        g.require(xs.size() == 5, "expected 5 sweep rows");
        if (xs.size() >= 2) {
            double mx = 0, my = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= static_cast<double>(xs.size());
            my /= static_cast<double>(xs.size());
            double sxy = 0, sxx = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                sxy += (xs[i] - mx) * (ys[i] - my);
                sxx += (xs[i] - mx) * (xs[i] - mx);
            }
            slope = sxy / sxx;
            std::ostringstream ss;
            ss << "log-log slope " << slope << " not below 4";
            g.require(slope < 4.0, ss.str());
        }
    }
    std::ostringstream note;
    note << "photons-per-pair vs distance slope " << slope << " < 4";
    return g.result(note.str());
}

} // namespace

int main() {
    struct entry {
        const char* label;
        criterion_result (*fn)();
    };
    const entry entries[] = {
        {"criterion 1 (tree readout, 4 km spacing)", criterion_1_tree_narrow},
        {"criterion 2 (tree readout, 8 km spacing)", criterion_2_tree_wide},
        {"criterion 3 (end-to-end, 4 km spacing)", criterion_3_narrow_end_to_end},
        {"criterion 4 (end-to-end, 8 km spacing)", criterion_4_wide_end_to_end},
        {"criterion 5 (800 km benchmark point)", criterion_5_benchmark},
        {"criterion 6 (direct-transmission baseline)", criterion_6_direct_transmission},
        {"criterion 7 (memory-time equivalent)", criterion_7_memory_time},
        {"criterion 8 (Monte Carlo agreement)", criterion_8_monte_carlo},
        {"criterion 9 (measurement-rule oracle)", criterion_9_measurement_rules},
        {"criterion 10 (polynomial scaling)", criterion_10_polynomial_scaling},
    };

    int failures = 0;
    for (const entry& e : entries) {
        criterion_result r;
        try {
            r = e.fn();
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("exception: ") + ex.what();
        }
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", e.label,
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    if (failures == 0) {
        std::printf("all 10 criteria passed\n");
    } else {
        std::printf("%d criteria failed\n", failures);
    }
    return failures;
}
