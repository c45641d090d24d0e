#include "config.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

namespace apqr::cfg {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

double require_number(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "required field is missing");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

long long require_int(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "required field is missing");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<long long>();
}

uint64_t unsigned_or(const json& obj, const std::string& path, const char* key,
                     uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))) {
        fail(path + "." + key, "expected a non-negative integer");
    }
    return v.get<uint64_t>();
}

bool bool_or(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

void check_range(double v, double lo, double hi, const std::string& where) {
    if (!std::isfinite(v) || v < lo || v > hi) {
        fail(where, "value out of range [" + json(lo).dump() + ", " + json(hi).dump() + "]");
    }
}

void check_positive(double v, const std::string& where) {
    if (!std::isfinite(v) || v <= 0.0) fail(where, "expected a positive finite number");
}

std::vector<int> parse_branches(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "required field is missing");
    const json& arr = obj.at(key);
    if (!arr.is_array() || arr.empty()) fail(path + "." + key, "expected a non-empty array");
    std::vector<int> out;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string where = path + "." + key + "[" + std::to_string(i) + "]";
        if (!arr[i].is_number_integer()) fail(where, "expected an integer");
        const long long b = arr[i].get<long long>();
        if (b < 1 || b > 1000000) fail(where, "branching factor must be within [1, 1000000]");
        out.push_back(static_cast<int>(b));
    }
    return out;
}

model::hardware_params parse_hardware(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"eta_source", "eta_detector", "tau_a_s", "source_rate_hz", "c_m_per_s",
                    "att_length_km"});
    model::hardware_params hw;
    hw.eta_s = require_number(j, path, "eta_source");
    check_range(hw.eta_s, 1e-12, 1.0, path + ".eta_source");
    hw.eta_d = require_number(j, path, "eta_detector");
    check_range(hw.eta_d, 1e-12, 1.0, path + ".eta_detector");
    hw.tau_a = require_number(j, path, "tau_a_s");
    check_range(hw.tau_a, 0.0, 1.0, path + ".tau_a_s");
    hw.source_rate_hz = number_or(j, path, "source_rate_hz", 1e5);
    check_positive(hw.source_rate_hz, path + ".source_rate_hz");
    hw.c = number_or(j, path, "c_m_per_s", 2e8);
    check_positive(hw.c, path + ".c_m_per_s");
    hw.l_att_km = number_or(j, path, "att_length_km", 22.0);
    check_positive(hw.l_att_km, path + ".att_length_km");
    return hw;
}

model::link_params parse_link(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"length_km", "spacing_km", "depolarizing_error"});
    model::link_params link;
    link.l_km = require_number(j, path, "length_km");
    check_positive(link.l_km, path + ".length_km");
    link.l0_km = require_number(j, path, "spacing_km");
    check_positive(link.l0_km, path + ".spacing_km");
    if (link.l0_km > link.l_km) fail(path + ".spacing_km", "spacing exceeds the link length");
    link.e_d = require_number(j, path, "depolarizing_error");
    check_range(link.e_d, 0.0, 0.75, path + ".depolarizing_error");
    return link;
}

void parse_protocol(const json& j, const std::string& path, run_config& out) {
    expect_object(j, path);
    reject_unknown(j, path, {"m", "branches", "prep_poly"});
    model::protocol_params proto;
    const long long m = require_int(j, path, "m");
    if (m < 1 || m > 1000000) fail(path + ".m", "m must be within [1, 1000000]");
    proto.m = static_cast<int>(m);
    proto.tree.branches = parse_branches(j, path, "branches");
    out.protocol = proto;
    if (j.contains("prep_poly")) {
        const json& arr = j.at("prep_poly");
        if (!arr.is_array() || arr.empty()) fail(path + ".prep_poly", "expected a non-empty array");
        prep::polynomial poly;
        poly.coeffs.clear();
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string where = path + ".prep_poly[" + std::to_string(i) + "]";
            if (!arr[i].is_number()) fail(where, "expected a number");
            const double c = arr[i].get<double>();
            if (!std::isfinite(c) || c < 0.0) fail(where, "coefficients must be non-negative");
            poly.coeffs.push_back(c);
        }
        out.prep_poly = poly;
    }
}

search::int_range parse_range(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
        fail(where, "expected a [lo, hi] integer pair");
    }
    const long long lo = v[0].get<long long>();
    const long long hi = v[1].get<long long>();
    if (lo < 1 || hi < lo || hi > 1000000) fail(where, "expected 1 <= lo <= hi <= 1000000");
    return search::int_range{static_cast<int>(lo), static_cast<int>(hi)};
}

search_section parse_search(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"m", "branches", "min_fidelity", "min_rate_hz", "max_epsilon0", "grid"});
    search_section out;
    if (!j.contains("m")) fail(path + ".m", "required field is missing");
    out.space.m_range = parse_range(j.at("m"), path + ".m");
    if (!j.contains("branches")) fail(path + ".branches", "required field is missing");
    const json& arr = j.at("branches");
    if (!arr.is_array() || arr.empty()) fail(path + ".branches", "expected a non-empty array");
    for (size_t i = 0; i < arr.size(); ++i) {
        out.space.branch_ranges.push_back(
            parse_range(arr[i], path + ".branches[" + std::to_string(i) + "]"));
    }
    if (j.contains("min_fidelity")) {
        const double v = require_number(j, path, "min_fidelity");
        check_range(v, 0.0, 1.0, path + ".min_fidelity");
        out.space.cons.min_fidelity = v;
    }
    if (j.contains("min_rate_hz")) {
        const double v = require_number(j, path, "min_rate_hz");
        check_range(v, 0.0, std::numeric_limits<double>::max(), path + ".min_rate_hz");
        out.space.cons.min_rate_hz = v;
    }
    if (j.contains("max_epsilon0")) {
        const double v = require_number(j, path, "max_epsilon0");
        check_range(v, 0.0, 0.5, path + ".max_epsilon0");
        out.space.cons.max_epsilon0 = v;
    }
    if (j.contains("grid")) {
        const json& grid = j.at("grid");
        if (!grid.is_array() || grid.empty()) fail(path + ".grid", "expected a non-empty array");
        for (size_t i = 0; i < grid.size(); ++i) {
            const std::string where = path + ".grid[" + std::to_string(i) + "]";
            expect_object(grid[i], where);
            reject_unknown(grid[i], where, {"length_km", "spacing_km", "depolarizing_error"});
            search::sweep_cell cell;
            cell.l_km = require_number(grid[i], where, "length_km");
            check_positive(cell.l_km, where + ".length_km");
            cell.l0_km = require_number(grid[i], where, "spacing_km");
            check_positive(cell.l0_km, where + ".spacing_km");
            if (grid[i].contains("depolarizing_error")) {
                const double e = require_number(grid[i], where, "depolarizing_error");
                check_range(e, 0.0, 0.75, where + ".depolarizing_error");
                cell.e_d = e;
            }
            out.grid.push_back(cell);
        }
    }
    return out;
}

mc_section parse_mc(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path,
                   {"trials", "seed", "confidence_sigma", "tree_suite", "repeater",
                    "physical_trials"});
    mc_section out;
    out.trials = unsigned_or(j, path, "trials", out.trials);
    if (out.trials < 1) fail(path + ".trials", "expected at least one trial");
    out.seed = unsigned_or(j, path, "seed", out.seed);
    out.confidence_sigma = number_or(j, path, "confidence_sigma", out.confidence_sigma);
    check_positive(out.confidence_sigma, path + ".confidence_sigma");
    out.repeater = bool_or(j, path, "repeater", false);
    out.physical_trials = unsigned_or(j, path, "physical_trials", 0);
    if (j.contains("tree_suite")) {
        const json& arr = j.at("tree_suite");
        if (!arr.is_array()) fail(path + ".tree_suite", "expected an array");
        for (size_t i = 0; i < arr.size(); ++i) {
            const std::string where = path + ".tree_suite[" + std::to_string(i) + "]";
            expect_object(arr[i], where);
            reject_unknown(arr[i], where,
                           {"branches", "epsilon0", "e_m", "basis", "trials",
                            "expected_success", "expected_error"});
            mc_tree_case c;
            c.tree.branches = parse_branches(arr[i], where, "branches");
            c.epsilon0 = require_number(arr[i], where, "epsilon0");
            check_range(c.epsilon0, 0.0, 1.0, where + ".epsilon0");
            if (c.epsilon0 >= 1.0) fail(where + ".epsilon0", "loss must be below 1");
            c.e_m = number_or(arr[i], where, "e_m", 0.0);
            check_range(c.e_m, 0.0, 0.5, where + ".e_m");
            if (arr[i].contains("basis")) {
                const json& b = arr[i].at("basis");
                if (!b.is_string()) fail(where + ".basis", "expected \"z\" or \"x\"");
                const std::string s = b.get<std::string>();
                if (s == "z") c.basis = mc::basis::z;
                else if (s == "x") c.basis = mc::basis::x;
                else fail(where + ".basis", "expected \"z\" or \"x\"");
            }
            if (arr[i].contains("trials")) {
                const uint64_t t = unsigned_or(arr[i], where, "trials", 0);
                if (t < 1) fail(where + ".trials", "expected at least one trial");
                c.trials = t;
            }
            if (arr[i].contains("expected_success")) {
                const double v = require_number(arr[i], where, "expected_success");
                check_range(v, 0.0, 1.0, where + ".expected_success");
                c.expected_success = v;
            }
            if (arr[i].contains("expected_error")) {
                const double v = require_number(arr[i], where, "expected_error");
                check_range(v, 0.0, 1.0, where + ".expected_error");
                c.expected_error = v;
            }
            out.tree_suite.push_back(std::move(c));
        }
    }
    return out;
}

output_options parse_output(const json& j, const std::string& path) {
    expect_object(j, path);
    reject_unknown(j, path, {"format", "path"});
    output_options out;
    if (j.contains("format")) {
        const json& f = j.at("format");
        if (!f.is_string()) fail(path + ".format", "expected \"json\" or \"csv\"");
        out.format = f.get<std::string>();
        if (out.format != "json" && out.format != "csv") {
            fail(path + ".format", "expected \"json\" or \"csv\"");
        }
    }
    if (j.contains("path")) {
        const json& p = j.at("path");
        if (!p.is_string()) fail(path + ".path", "expected a string");
        out.path = p.get<std::string>();
    }
    return out;
}

} // namespace

run_config parse(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    expect_object(root, "config");
    reject_unknown(root, "", {"hardware", "link", "protocol", "search", "mc", "output"});
    run_config out;
    if (root.contains("hardware")) out.hardware = parse_hardware(root.at("hardware"), "hardware");
    if (root.contains("link")) out.link = parse_link(root.at("link"), "link");
    if (root.contains("protocol")) parse_protocol(root.at("protocol"), "protocol", out);
    if (root.contains("search")) out.search = parse_search(root.at("search"), "search");
    if (root.contains("mc")) out.mc = parse_mc(root.at("mc"), "mc");
    if (root.contains("output")) out.output = parse_output(root.at("output"), "output");
    return out;
}

overrides parse_overrides(const std::string& json_text) {
    overrides out;
    if (json_text.empty()) return out;
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("overrides are not valid JSON: ") + e.what());
    }
    if (root.is_null()) return out;
    expect_object(root, "overrides");
    reject_unknown(root, "overrides", {"trials", "seed", "threads", "format"});
    if (root.contains("trials")) {
        const uint64_t t = unsigned_or(root, "overrides", "trials", 0);
        if (t < 1) fail("overrides.trials", "expected at least one trial");
        out.trials = t;
    }
    if (root.contains("seed")) out.seed = unsigned_or(root, "overrides", "seed", 0);
    if (root.contains("threads")) {
        const json& v = root.at("threads");
        if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 4096) {
            fail("overrides.threads", "expected an integer within [0, 4096]");
        }
        out.threads = static_cast<int>(v.get<long long>());
    }
    if (root.contains("format")) {
        const json& f = root.at("format");
        if (!f.is_string()) fail("overrides.format", "expected \"json\" or \"csv\"");
        const std::string s = f.get<std::string>();
        if (s != "json" && s != "csv") fail("overrides.format", "expected \"json\" or \"csv\"");
        out.format = s;
    }
    return out;
}

} // namespace apqr::cfg
