#include "runner.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "checks.hpp"
#include "mc.hpp"
#include "optimize.hpp"
#include "prep.hpp"

namespace apqr::run {

namespace {

using json = nlohmann::ordered_json;

struct compute_error : std::runtime_error {
    std::string stage;
    compute_error(std::string st, const std::string& what)
        : std::runtime_error(what), stage(std::move(st)) {}
};

std::string sig3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string branches_text(const std::vector<int>& b) {
    std::string out = "{";
    for (size_t i = 0; i < b.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(b[i]);
    }
    return out + "}";
}

const model::hardware_params& need_hardware(const cfg::run_config& rc, const char* cmd) {
    if (!rc.hardware) {
        throw cfg::config_error(std::string("command '") + cmd + "' requires section 'hardware'");
    }
    return *rc.hardware;
}

const model::link_params& need_link(const cfg::run_config& rc, const char* cmd) {
    if (!rc.link) {
        throw cfg::config_error(std::string("command '") + cmd + "' requires section 'link'");
    }
    return *rc.link;
}

const model::protocol_params& need_protocol(const cfg::run_config& rc, const char* cmd) {
    if (!rc.protocol) {
        throw cfg::config_error(std::string("command '") + cmd + "' requires section 'protocol'");
    }
    return *rc.protocol;
}

json hardware_json(const model::hardware_params& hw) {
    json j;
    j["eta_source"] = hw.eta_s;
    j["eta_detector"] = hw.eta_d;
    j["tau_a_s"] = hw.tau_a;
    j["source_rate_hz"] = hw.source_rate_hz;
    j["c_m_per_s"] = hw.c;
    j["att_length_km"] = hw.l_att_km;
    return j;
}

json link_json(const model::link_params& link) {
    json j;
    j["length_km"] = link.l_km;
    j["spacing_km"] = link.l0_km;
    j["depolarizing_error"] = link.e_d;
    return j;
}

json protocol_json(const model::protocol_params& proto) {
    json j;
    j["m"] = proto.m;
    j["branches"] = proto.tree.branches;
    return j;
}

json tree_json(const tree::tree_metrics& tm) {
    json j;
    j["q_l"] = tm.q_l;
    j["r_profile"] = tm.r_profile;
    json err = json::array();
    for (const auto& e : tm.err_profile) {
        if (e.has_value()) err.push_back(*e);
        else err.push_back(nullptr);
    }
    j["err_profile"] = err;
    j["p_z"] = tm.p_z;
    j["p_x"] = tm.p_x;
    j["p_general"] = tm.p_general;
    j["one_minus_p_z"] = tm.one_minus_p_z;
    j["one_minus_p_x"] = tm.one_minus_p_x;
    j["one_minus_p_general"] = tm.one_minus_p_general;
    if (tm.e_z.has_value()) j["e_z"] = *tm.e_z;
    else j["e_z"] = nullptr;
    if (tm.e_x.has_value()) j["e_x"] = *tm.e_x;
    else j["e_x"] = nullptr;
    return j;
}

json eval_json(const model::evaluation& ev) {
    json j;
    j["n"] = ev.n;
    j["segments_exact"] = ev.segments_exact;
    j["epsilon0"] = ev.epsilon0;
    j["e_m"] = ev.e_m;
    j["q_l"] = ev.q_l;
    j["tau_s_s"] = ev.tau_s;
    j["tau_c_s"] = ev.tau_c;
    j["p_z"] = ev.p_z;
    j["p_x"] = ev.p_x;
    j["p_general"] = ev.p_general;
    j["one_minus_p_z"] = ev.one_minus_p_z;
    j["one_minus_p_x"] = ev.one_minus_p_x;
    j["one_minus_p_general"] = ev.one_minus_p_general;
    j["e_z_bar"] = ev.e_z_bar;
    j["e_x_bar"] = ev.e_x_bar;
    j["p_bell"] = ev.p_b;
    j["p"] = ev.p;
    j["rate_hz"] = ev.rate_hz;
    j["photons_per_trial"] = ev.photons_per_trial;
    j["photons_per_node_per_trial"] = ev.photons_per_node_per_trial;
    j["q_bar"] = ev.q_bar;
    j["e_x"] = ev.errors.e_x;
    j["e_y"] = ev.errors.e_y;
    j["e_z"] = ev.errors.e_z;
    j["fidelity"] = ev.errors.fidelity;
    j["t_max_s"] = ev.t_max;
    j["t_mem_a_s"] = ev.t_mem_a;
    j["t_mem_b_s"] = ev.t_mem_b;
    return j;
}

json prep_json(const prep::prep_estimate& pe) {
    json j;
    j["tau_s_s"] = pe.tau_s;
    j["tau_c_s"] = pe.tau_c;
    j["ghz_success"] = pe.ghz_success;
    j["ghz_effective_loss"] = pe.ghz_effective_loss;
    j["p2_lower"] = pe.p2_lower;
    j["p2_upper"] = pe.p2_upper;
    j["q_s_bound"] = pe.q_s_bound;
    j["q_c_bound"] = pe.q_c_bound;
    return j;
}

json candidate_json(const search::scored& s) {
    json j;
    j["m"] = s.cand.m;
    j["branches"] = s.cand.branches;
    j["metrics"] = eval_json(s.eval);
    return j;
}

json search_json(const search::space& sp) {
    json j;
    j["m"] = json::array({sp.m_range.lo, sp.m_range.hi});
    json br = json::array();
    for (const auto& r : sp.branch_ranges) br.push_back(json::array({r.lo, r.hi}));
    j["branches"] = br;
    if (sp.cons.min_fidelity) j["min_fidelity"] = *sp.cons.min_fidelity;
    if (sp.cons.min_rate_hz) j["min_rate_hz"] = *sp.cons.min_rate_hz;
    if (sp.cons.max_epsilon0) j["max_epsilon0"] = *sp.cons.max_epsilon0;
    return j;
}

void add_segment_warning(const model::evaluation& ev, json& warnings) {
    if (!ev.segments_exact) {
        warnings.push_back("link length is not an integer multiple of the segment spacing; "
                           "station count rounded to n=" +
                           std::to_string(ev.n));
    }
}

json cmd_evaluate(const cfg::run_config& rc, json& warnings, std::string& human) {
    const model::config c{need_hardware(rc, "evaluate"), need_link(rc, "evaluate"),
                          need_protocol(rc, "evaluate")};
    model::evaluation ev;
    prep::prep_estimate pe;
    model::direct_cost dc;
    try {
        ev = model::evaluate(c);
        pe = prep::estimate(c.proto.m, c.proto.tree, prep::source_params{c.hw.eta_s, c.hw.eta_d},
                            c.hw.tau_a, model::survival_per_step(c.hw.tau_a, c.hw.c, c.hw.l_att_km),
                            rc.prep_poly);
        dc = model::direct_transmission_cost(c.link.l_km, c.hw.source_rate_hz, c.hw.l_att_km);
    } catch (const std::exception& e) {
        throw compute_error("evaluate", e.what());
    }
    add_segment_warning(ev, warnings);
    json results;
    json inputs;
    inputs["hardware"] = hardware_json(c.hw);
    inputs["link"] = link_json(c.link);
    inputs["protocol"] = protocol_json(c.proto);
    results["inputs"] = inputs;
    results["repeater"] = eval_json(ev);
    results["tree"] = tree_json(ev.tree_metrics);
    results["preparation"] = prep_json(pe);
    json direct;
    direct["photons"] = dc.photons;
    direct["seconds"] = dc.seconds;
    results["direct_transmission"] = direct;
    std::ostringstream h;
    h << "evaluate: L=" << sig3(c.link.l_km) << " km, spacing " << sig3(c.link.l0_km)
      << " km, m=" << c.proto.m << ", tree " << branches_text(c.proto.tree.branches) << "\n"
      << "  loss " << sig3(ev.epsilon0) << ", bell " << sig3(ev.p_b) << ", trial success "
      << sig3(ev.p) << ", rate " << sig3(ev.rate_hz) << " Hz\n"
      << "  photons/pair " << sig3(ev.q_bar) << ", errors X/Y/Z " << sig3(ev.errors.e_x) << "/"
      << sig3(ev.errors.e_y) << "/" << sig3(ev.errors.e_z) << ", fidelity "
      << sig3(ev.errors.fidelity) << "\n";
    human = h.str();
    return results;
}

json cmd_optimize(const cfg::run_config& rc, const cfg::overrides& ov, json& warnings,
                  std::string& human) {
    const model::hardware_params& hw = need_hardware(rc, "optimize");
    const model::link_params& link = need_link(rc, "optimize");
    if (!rc.search) {
        throw cfg::config_error("command 'optimize' requires section 'search'");
    }
    search::result res;
    try {
        res = search::optimize(rc.search->space, hw, link, ov.threads.value_or(0));
    } catch (const std::exception& e) {
        throw compute_error("optimize", e.what());
    }
    json results;
    json inputs;
    inputs["hardware"] = hardware_json(hw);
    inputs["link"] = link_json(link);
    inputs["search"] = search_json(rc.search->space);
    results["inputs"] = inputs;
    results["evaluated"] = res.evaluated;
    results["feasible"] = res.feasible;
    results["found"] = res.found;
    if (res.found) {
        add_segment_warning(res.best.eval, warnings);
        results["best"] = candidate_json(res.best);
    } else {
        results["best"] = nullptr;
    }
    if (res.best_infeasible.has_value()) {
        results["best_infeasible"] = candidate_json(*res.best_infeasible);
    } else {
        results["best_infeasible"] = nullptr;
    }
    json frontier = json::array();
    for (const auto& s : res.frontier) frontier.push_back(candidate_json(s));
    results["frontier"] = frontier;
    std::ostringstream h;
    h << "optimize: " << res.evaluated << " candidates, " << res.feasible << " feasible\n";
    if (res.found) {
        h << "  best m=" << res.best.cand.m << " tree " << branches_text(res.best.cand.branches)
          << ": photons/pair " << sig3(res.best.eval.q_bar) << ", fidelity "
          << sig3(res.best.eval.errors.fidelity) << ", rate " << sig3(res.best.eval.rate_hz)
          << " Hz\n";
    } else if (res.best_infeasible.has_value()) {
        h << "  no feasible candidate; closest m=" << res.best_infeasible->cand.m << " tree "
          << branches_text(res.best_infeasible->cand.branches) << "\n";
    } else {
        h << "  no feasible candidate\n";
    }
    human = h.str();
    return results;
}

json cmd_sweep(const cfg::run_config& rc, const cfg::overrides& ov, std::string& human) {
    const model::hardware_params& hw = need_hardware(rc, "sweep");
    const model::link_params& link = need_link(rc, "sweep");
    if (!rc.search) {
        throw cfg::config_error("command 'sweep' requires section 'search'");
    }
    if (rc.search->grid.empty()) {
        throw cfg::config_error("command 'sweep' requires a non-empty 'search.grid'");
    }
    std::vector<search::sweep_row> rows;
    try {
        rows = search::sweep(rc.search->grid, rc.search->space, hw, link,
                             ov.threads.value_or(0));
    } catch (const std::exception& e) {
        throw compute_error("sweep", e.what());
    }
    json results;
    json inputs;
    inputs["hardware"] = hardware_json(hw);
    inputs["link"] = link_json(link);
    inputs["search"] = search_json(rc.search->space);
    results["inputs"] = inputs;
    json out_rows = json::array();
    std::ostringstream h;
    h << "sweep: " << rows.size() << " cells\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        json r;
        r["length_km"] = row.cell.l_km;
        r["spacing_km"] = row.cell.l0_km;
        r["depolarizing_error"] = row.cell.e_d.has_value() ? *row.cell.e_d : link.e_d;
        if (!row.error.empty()) {
            r["error"] = row.error;
            r["found"] = false;
            r["best"] = nullptr;
            h << "  cell " << i << ": L=" << sig3(row.cell.l_km) << " km failed: " << row.error
              << "\n";
        } else {
            r["error"] = "";
            r["found"] = row.res->found;
            r["evaluated"] = row.res->evaluated;
            r["feasible"] = row.res->feasible;
            if (row.res->found) {
                r["best"] = candidate_json(row.res->best);
                h << "  cell " << i << ": L=" << sig3(row.cell.l_km) << " km -> photons/pair "
                  << sig3(row.res->best.eval.q_bar) << " (m=" << row.res->best.cand.m << ", tree "
                  << branches_text(row.res->best.cand.branches) << ")\n";
            } else {
                r["best"] = nullptr;
                h << "  cell " << i << ": L=" << sig3(row.cell.l_km)
                  << " km has no feasible candidate\n";
            }
        }
        out_rows.push_back(r);
    }
    results["rows"] = out_rows;
    human = h.str();
    return results;
}

json estimate_json(std::optional<double> analytic, const mc::estimate& est, double sigma,
                   bool& all_ok) {
    json j;
    if (analytic.has_value()) j["analytic"] = *analytic;
    else j["analytic"] = nullptr;
    j["mean"] = est.mean;
    j["std_error"] = est.std_error;
    j["trials"] = est.trials;
    j["count"] = est.count;
    if (analytic.has_value()) {
        if (est.std_error > 0.0) j["z"] = (est.mean - *analytic) / est.std_error;
        else j["z"] = nullptr;
        const bool ok = mc::compare(*analytic, est, sigma) == mc::verdict::consistent;
        j["verdict"] = ok ? "consistent" : "inconsistent";
        if (!ok) all_ok = false;
    } else {
        j["z"] = nullptr;
        j["verdict"] = "unchecked";
    }
    return j;
}

json repeater_quantities(const model::evaluation& ev, const mc::repeater_result& rr,
                         double sigma, bool& all_ok) {
    json quantities = json::array();
    const std::pair<const char*, std::pair<double, const mc::estimate*>> rows[] = {
        {"p", {ev.p, &rr.p}},
        {"e_x", {ev.errors.e_x, &rr.e_x}},
        {"e_y", {ev.errors.e_y, &rr.e_y}},
        {"e_z", {ev.errors.e_z, &rr.e_z}},
    };
    for (const auto& [name, pair] : rows) {
        json q = estimate_json(pair.first, *pair.second, sigma, all_ok);
        json named;
        named["quantity"] = name;
        for (auto& item : q.items()) named[item.key()] = item.value();
        quantities.push_back(named);
    }
    return quantities;
}

json cmd_mc(const cfg::run_config& rc, const cfg::overrides& ov, std::string& human, int& code) {
    if (!rc.mc.has_value()) {
        throw cfg::config_error("command 'mc' requires section 'mc'");
    }
    const cfg::mc_section& sec = *rc.mc;
    if (sec.tree_suite.empty() && !sec.repeater && sec.physical_trials == 0) {
        throw cfg::config_error(
            "command 'mc' needs mc.tree_suite, mc.repeater, or mc.physical_trials");
    }
    mc::settings st;
    st.trials = ov.trials.value_or(sec.trials);
    st.seed = ov.seed.value_or(sec.seed);
    st.confidence_sigma = sec.confidence_sigma;
    st.threads = ov.threads.value_or(0);
    bool all_ok = true;
    json results;
    results["trials"] = st.trials;
    results["seed"] = st.seed;
    results["confidence_sigma"] = st.confidence_sigma;
    std::ostringstream h;
    json suite = json::array();
    for (const auto& tc : sec.tree_suite) {
        std::optional<double> analytic_success = tc.expected_success;
        std::optional<double> analytic_error = tc.expected_error;
        mc::tree_result res;
        try {
            const tree::tree_metrics tm = tree::analyze(tc.tree, tc.epsilon0, tc.e_m);
            if (!analytic_success.has_value()) {
                analytic_success = tc.basis == mc::basis::z ? tm.p_z : tm.p_x;
            }
            if (!analytic_error.has_value()) {
                analytic_error = tc.basis == mc::basis::z ? tm.e_z : tm.e_x;
            }
            mc::settings cst = st;
            if (tc.trials.has_value()) cst.trials = *tc.trials;
            res = mc::sample_tree_measurement(tc.tree, tc.epsilon0, tc.e_m, tc.basis, cst);
        } catch (const std::exception& e) {
            throw compute_error("mc_tree", e.what());
        }
        json row;
        row["branches"] = tc.tree.branches;
        row["epsilon0"] = tc.epsilon0;
        row["e_m"] = tc.e_m;
        row["basis"] = tc.basis == mc::basis::z ? "z" : "x";
        row["trials"] = tc.trials.has_value() ? *tc.trials : st.trials;
        bool case_ok = true;
        row["success"] = estimate_json(analytic_success, res.success, st.confidence_sigma, case_ok);
        row["error_given_success"] =
            estimate_json(analytic_error, res.error_given_success, st.confidence_sigma, case_ok);
        suite.push_back(row);
        if (!case_ok) all_ok = false;
        h << "  tree " << branches_text(tc.tree.branches) << " eps=" << sig3(tc.epsilon0)
          << " em=" << sig3(tc.e_m) << " " << (tc.basis == mc::basis::z ? "z" : "x") << ": "
          << (case_ok ? "consistent" : "INCONSISTENT") << "\n";
    }
    results["tree"] = suite;
    if (sec.repeater) {
        const model::config c{need_hardware(rc, "mc"), need_link(rc, "mc"),
                              need_protocol(rc, "mc")};
        try {
            const model::evaluation ev = model::evaluate(c);
            const mc::repeater_inputs in = mc::inputs_from(ev, c.proto.m);
            const mc::repeater_result rr = mc::sample_repeater(in, st);
            bool rep_ok = true;
            json rep;
            rep["trials"] = st.trials;
            rep["quantities"] = repeater_quantities(ev, rr, st.confidence_sigma, rep_ok);
            results["repeater"] = rep;
            if (!rep_ok) all_ok = false;
            h << "  repeater frame sampling: " << (rep_ok ? "consistent" : "INCONSISTENT") << "\n";
        } catch (const cfg::config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw compute_error("mc_repeater", e.what());
        }
    }
    if (sec.physical_trials > 0) {
        const model::config c{need_hardware(rc, "mc"), need_link(rc, "mc"),
                              need_protocol(rc, "mc")};
        try {
            const model::evaluation ev = model::evaluate(c);
            mc::settings pst = st;
            pst.trials = sec.physical_trials;
            const mc::repeater_result rr = mc::sample_repeater_physical(c, pst);
            bool phys_ok = true;
            json phys;
            phys["trials"] = pst.trials;
            phys["quantities"] = repeater_quantities(ev, rr, pst.confidence_sigma, phys_ok);
            results["physical"] = phys;
            if (!phys_ok) all_ok = false;
            h << "  repeater physical sampling: " << (phys_ok ? "consistent" : "INCONSISTENT")
              << "\n";
        } catch (const cfg::config_error&) {
            throw;
        } catch (const std::exception& e) {
            throw compute_error("mc_physical", e.what());
        }
    }
    results["all_consistent"] = all_ok;
    code = all_ok ? exit_ok : exit_verdict;
    human = "mc: " + std::string(all_ok ? "all quantities consistent" : "INCONSISTENT") + "\n" +
            h.str();
    return results;
}

json cmd_oracle(const cfg::overrides& ov, std::string& human, int& code) {
    std::vector<checks::check_result> res;
    try {
        res = checks::run_all(ov.threads.value_or(0));
    } catch (const std::exception& e) {
        throw compute_error("oracle", e.what());
    }
    bool all_pass = true;
    json list = json::array();
    std::ostringstream h;
    for (const auto& c : res) {
        json row;
        row["name"] = c.name;
        row["pass"] = c.pass;
        row["cases"] = c.cases;
        row["detail"] = c.detail;
        list.push_back(row);
        if (!c.pass) all_pass = false;
        h << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL") << " (" << c.cases << " cases)";
        if (!c.pass) h << " " << c.detail;
        h << "\n";
    }
    json results;
    results["checks"] = list;
    results["all_pass"] = all_pass;
    code = all_pass ? exit_ok : exit_verdict;
    human = "oracle: " + std::string(all_pass ? "all checks pass" : "CHECK FAILURE") + "\n" +
            h.str();
    return results;
}

// ---- CSV rendering -------------------------------------------------------

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_value(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return csv_escape(v.get<std::string>());
    return v.dump();
}

const char* const eval_columns[] = {
    "label", "length_km", "spacing_km", "depolarizing_error", "m", "branches", "n",
    "epsilon0", "e_m", "q_l", "tau_s_s", "p_bell", "p", "rate_hz", "q_bar",
    "photons_per_trial", "photons_per_node_per_trial", "e_x", "e_y", "e_z", "fidelity",
    "one_minus_p_z", "one_minus_p_x", "one_minus_p_general", "e_z_bar", "e_x_bar",
    "t_max_s", "t_mem_a_s", "t_mem_b_s", "error"};

std::string join_branches_csv(const json& branches) {
    std::string out;
    for (size_t i = 0; i < branches.size(); ++i) {
        if (i) out += "|";
        out += branches[i].dump();
    }
    return out;
}

void eval_csv_header(std::ostream& os) {
    for (size_t i = 0; i < std::size(eval_columns); ++i) {
        if (i) os << ',';
        os << eval_columns[i];
    }
    os << '\n';
}

// One evaluation row. cand = {m, branches, metrics} or null; link fields are
// passed separately since sweep cells override them.
void eval_csv_row(std::ostream& os, const std::string& label, const json& length_km,
                  const json& spacing_km, const json& e_d, const json& cand,
                  const std::string& error) {
    json row;
    row["label"] = label;
    row["length_km"] = length_km;
    row["spacing_km"] = spacing_km;
    row["depolarizing_error"] = e_d;
    if (cand.is_object()) {
        row["m"] = cand.at("m");
        row["branches"] = join_branches_csv(cand.at("branches"));
        const json& m = cand.at("metrics");
        row["n"] = m.at("n");
        row["epsilon0"] = m.at("epsilon0");
        row["e_m"] = m.at("e_m");
        row["q_l"] = m.at("q_l");
        row["tau_s_s"] = m.at("tau_s_s");
        row["p_bell"] = m.at("p_bell");
        row["p"] = m.at("p");
        row["rate_hz"] = m.at("rate_hz");
        row["q_bar"] = m.at("q_bar");
        row["photons_per_trial"] = m.at("photons_per_trial");
        row["photons_per_node_per_trial"] = m.at("photons_per_node_per_trial");
        row["e_x"] = m.at("e_x");
        row["e_y"] = m.at("e_y");
        row["e_z"] = m.at("e_z");
        row["fidelity"] = m.at("fidelity");
        row["one_minus_p_z"] = m.at("one_minus_p_z");
        row["one_minus_p_x"] = m.at("one_minus_p_x");
        row["one_minus_p_general"] = m.at("one_minus_p_general");
        row["e_z_bar"] = m.at("e_z_bar");
        row["e_x_bar"] = m.at("e_x_bar");
        row["t_max_s"] = m.at("t_max_s");
        row["t_mem_a_s"] = m.at("t_mem_a_s");
        row["t_mem_b_s"] = m.at("t_mem_b_s");
    }
    row["error"] = error;
    for (size_t i = 0; i < std::size(eval_columns); ++i) {
        if (i) os << ',';
        if (row.contains(eval_columns[i])) os << csv_value(row.at(eval_columns[i]));
    }
    os << '\n';
}

std::string to_csv(const std::string& command, const json& results) {
    std::ostringstream os;
    if (command == "evaluate") {
        eval_csv_header(os);
        const json& inputs = results.at("inputs");
        json cand;
        cand["m"] = inputs.at("protocol").at("m");
        cand["branches"] = inputs.at("protocol").at("branches");
        cand["metrics"] = results.at("repeater");
        eval_csv_row(os, "evaluate", inputs.at("link").at("length_km"),
                     inputs.at("link").at("spacing_km"),
                     inputs.at("link").at("depolarizing_error"), cand, "");
        return os.str();
    }
    if (command == "optimize") {
        eval_csv_header(os);
        const json& inputs = results.at("inputs");
        const json& link = inputs.at("link");
        if (results.at("found").get<bool>()) {
            eval_csv_row(os, "best", link.at("length_km"), link.at("spacing_km"),
                         link.at("depolarizing_error"), results.at("best"), "");
        } else {
            eval_csv_row(os, "best", link.at("length_km"), link.at("spacing_km"),
                         link.at("depolarizing_error"),
                         results.at("best_infeasible").is_null() ? json(nullptr)
                                                                 : results.at("best_infeasible"),
                         "no feasible candidate");
        }
        for (const auto& f : results.at("frontier")) {
            eval_csv_row(os, "frontier", link.at("length_km"), link.at("spacing_km"),
                         link.at("depolarizing_error"), f, "");
        }
        return os.str();
    }
    if (command == "sweep") {
        eval_csv_header(os);
        const json& rows = results.at("rows");
        for (size_t i = 0; i < rows.size(); ++i) {
            const json& r = rows[i];
            std::string error = r.at("error").get<std::string>();
            if (error.empty() && !r.at("found").get<bool>()) error = "no feasible candidate";
            eval_csv_row(os, "cell" + std::to_string(i), r.at("length_km"), r.at("spacing_km"),
                         r.at("depolarizing_error"),
                         r.at("best").is_null() ? json(nullptr) : r.at("best"), error);
        }
        return os.str();
    }
    if (command == "mc") {
        os << "section,case,quantity,analytic,mean,std_error,z,trials,count,verdict\n";
        auto emit = [&os](const std::string& section, const std::string& name,
                          const std::string& quantity, const json& e) {
            os << section << ',' << csv_escape(name) << ',' << quantity << ','
               << csv_value(e.at("analytic")) << ',' << csv_value(e.at("mean")) << ','
               << csv_value(e.at("std_error")) << ',' << csv_value(e.at("z")) << ','
               << csv_value(e.at("trials")) << ',' << csv_value(e.at("count")) << ','
               << csv_value(e.at("verdict")) << '\n';
        };
        for (const auto& row : results.at("tree")) {
            std::string name = join_branches_csv(row.at("branches"));
            name += "|eps=" + row.at("epsilon0").dump();
            name += "|em=" + row.at("e_m").dump();
            name += "|" + row.at("basis").get<std::string>();
            emit("tree", name, "success", row.at("success"));
            emit("tree", name, "error_given_success", row.at("error_given_success"));
        }
        for (const char* section : {"repeater", "physical"}) {
            if (!results.contains(section)) continue;
            for (const auto& q : results.at(section).at("quantities")) {
                emit(section, section, q.at("quantity").get<std::string>(), q);
            }
        }
        return os.str();
    }
    if (command == "oracle") {
        os << "check,pass,cases,detail\n";
        for (const auto& c : results.at("checks")) {
            os << csv_value(c.at("name")) << ',' << (c.at("pass").get<bool>() ? "true" : "false")
               << ',' << csv_value(c.at("cases")) << ',' << csv_value(c.at("detail")) << '\n';
        }
        return os.str();
    }
    throw compute_error("csv", "no CSV schema for command '" + command + "'");
}

} // namespace

outcome run(const cfg::run_config& rc, const std::string& command, const cfg::overrides& ov) {
    outcome out;
    const std::string format = ov.format.value_or(rc.output.format);
    json doc;
    doc["schema_version"] = 1;
    doc["command"] = command;
    try {
        if (command != "evaluate" && command != "optimize" && command != "sweep" &&
            command != "mc" && command != "oracle") {
            throw cfg::config_error("unknown command '" + command + "'");
        }
        json warnings = json::array();
        json results;
        int code = exit_ok;
        if (command == "evaluate") results = cmd_evaluate(rc, warnings, out.human);
        else if (command == "optimize") results = cmd_optimize(rc, ov, warnings, out.human);
        else if (command == "sweep") results = cmd_sweep(rc, ov, out.human);
        else if (command == "mc") results = cmd_mc(rc, ov, out.human, code);
        else results = cmd_oracle(ov, out.human, code);
        doc["warnings"] = warnings;
        doc["results"] = results;
        out.code = code;
        if (format == "csv") out.document = to_csv(command, results);
        else out.document = doc.dump(2) + "\n";
    } catch (const cfg::config_error& e) {
        out.code = exit_config;
        json err;
        err["code"] = exit_config;
        err["message"] = e.what();
        doc["error"] = err;
        out.document = doc.dump(2) + "\n";
        out.human = std::string("config error: ") + e.what() + "\n";
    } catch (const compute_error& e) {
        out.code = exit_compute;
        json err;
        err["code"] = exit_compute;
        err["stage"] = e.stage;
        err["message"] = e.what();
        doc["error"] = err;
        out.document = doc.dump(2) + "\n";
        out.human = "computation error in stage '" + e.stage + "': " + e.what() + "\n";
    } catch (const std::exception& e) {
        out.code = exit_compute;
        json err;
        err["code"] = exit_compute;
        err["stage"] = command;
        err["message"] = e.what();
        doc["error"] = err;
        out.document = doc.dump(2) + "\n";
        out.human = std::string("computation error: ") + e.what() + "\n";
    }
    return out;
}

outcome run_json(const std::string& config_json, const std::string& command,
                 const std::string& overrides_json) {
    cfg::run_config rc;
    cfg::overrides ov;
    try {
        rc = cfg::parse(config_json);
        ov = cfg::parse_overrides(overrides_json);
    } catch (const cfg::config_error& e) {
        outcome out;
        out.code = exit_config;
        json doc;
        doc["schema_version"] = 1;
        doc["command"] = command;
        json err;
        err["code"] = exit_config;
        err["message"] = e.what();
        doc["error"] = err;
        out.document = doc.dump(2) + "\n";
        out.human = std::string("config error: ") + e.what() + "\n";
        return out;
    }
    return run(rc, command, ov);
}

} // namespace apqr::run
