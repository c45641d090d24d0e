#include "repeater.hpp"

#include "prep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apqr::model {

void validate(const hardware_params& hw) {
    if (!(hw.eta_s > 0.0 && hw.eta_s <= 1.0) || !(hw.eta_d > 0.0 && hw.eta_d <= 1.0)) {
        throw std::invalid_argument("efficiencies must be in (0, 1]");
    }
    if (!(hw.tau_a >= 0.0)) throw std::invalid_argument("tau_a must be >= 0");
    if (!(hw.source_rate_hz > 0.0)) throw std::invalid_argument("source rate must be > 0");
    if (!(hw.c > 0.0)) throw std::invalid_argument("speed of light must be > 0");
    if (!(hw.l_att_km > 0.0)) throw std::invalid_argument("attenuation length must be > 0");
}

void validate(const link_params& link) {
    if (!(link.l_km > 0.0)) throw std::invalid_argument("l_km must be > 0");
    if (!(link.l0_km > 0.0)) throw std::invalid_argument("l0_km must be > 0");
    if (!(link.l0_km <= link.l_km)) {
        throw std::invalid_argument("l0_km must not exceed l_km");
    }
    if (!(link.e_d >= 0.0 && link.e_d <= 0.75)) {
        throw std::invalid_argument("e_d must be within [0, 0.75]");
    }
}

void validate(const config& cfg) {
    validate(cfg.hw);
    validate(cfg.link);
    if (cfg.proto.m < 1) throw std::invalid_argument("m must be >= 1");
    tree::validate(cfg.proto.tree);
}

double survival_per_step(double tau_a, double c, double l_att_km) {
    if (!(tau_a >= 0.0) || !(c > 0.0) || !(l_att_km > 0.0)) {
        throw std::invalid_argument("survival_per_step needs tau_a >= 0, c > 0, l_att > 0");
    }
    return std::exp(-c * tau_a / (l_att_km * 1e3));
}

double effective_loss(int m, const tree::tree_params& t, const hardware_params& hw,
                      double l0_km) {
    validate(hw);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double tau_s = prep::prep_time_star(m, t, hw.tau_a);
    const double tau_c = prep::prep_time_complete(tau_s, hw.tau_a);
    // Survival over tau_c + 2 tau_a of fiber delay, written as a single
    // exponential so that tau_a -> 0 stays well defined.
    const double survival =
        std::exp(-hw.c * (tau_c + 2.0 * hw.tau_a) / (hw.l_att_km * 1e3));
    const double eta = hw.eta_s * hw.eta_d;
    return 1.0 - std::exp(-l0_km / (2.0 * hw.l_att_km)) * survival * eta / (2.0 - eta);
}

double bell_success(double epsilon0) {
    if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) {
        throw std::invalid_argument("epsilon0 must be within [0, 1]");
    }
    return (1.0 - epsilon0) * (1.0 - epsilon0) / 2.0;
}

double trial_success(double p_z, double p_x, double p_b, int m, long long n) {
    if (m < 1 || n < 1) throw std::invalid_argument("trial_success needs m >= 1, n >= 1");
    const double nd = static_cast<double>(n);
    return std::pow(p_z, 2.0 * (m - 1) * nd) * std::pow(p_x, 2.0 * nd) *
           std::pow(1.0 - std::pow(1.0 - p_b, static_cast<double>(m)), nd + 1.0);
}

double pair_rate(double p, double source_rate_hz) { return p * source_rate_hz; }

long long photons_per_trial(int m, long long n, long long q_l) {
    long long per_node = 0, total = 0;
    // per node: 2m arms, each carrying a tree of q_l photons plus its root
    if (__builtin_mul_overflow(2LL * m, q_l + 1, &per_node) ||
        __builtin_mul_overflow(per_node, n, &total) ||
        __builtin_add_overflow(total, 2LL * m, &total)) {
        throw std::overflow_error("photons per trial exceeds the 64-bit range");
    }
    return total;
}

double photons_per_pair(int m, long long n, long long q_l, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("success probability must be > 0");
    return static_cast<double>(photons_per_trial(m, n, q_l)) / p;
}

double max_photon_lifetime(double tau_c, double tau_a, double l0_km, double c) {
    return tau_c + l0_km * 1e3 / (2.0 * c) + 2.0 * tau_a;
}

double memory_time(memory_strategy s, double l_km, double l0_km, double c,
                   double tau_a) {
    switch (s) {
    case memory_strategy::a:
        return l0_km * 1e3 / (2.0 * c) + 2.0 * tau_a + l_km * 1e3 / c;
    case memory_strategy::b:
        return 2.0 * tau_a + 2.0 * l_km * 1e3 / c;
    }
    throw std::invalid_argument("unknown memory strategy");
}

pair_errors final_pair_errors(double e_m, double e_x_bar, double e_z_bar, int m,
                              long long n) {
    if (m < 1 || n < 1) throw std::invalid_argument("final_pair_errors needs m >= 1, n >= 1");
    for (double e : {e_m, e_x_bar, e_z_bar}) {
        if (!(e >= 0.0 && e <= 0.5)) {
            throw std::invalid_argument("error rates must be within [0, 0.5]");
        }
    }
    const double nd = static_cast<double>(n);
    const double u = std::pow(1.0 - 2.0 * e_m, 2.0 * (nd + 1.0)) *
                     std::pow(1.0 - 2.0 * e_x_bar, 2.0 * nd);
    const double t = std::pow(1.0 - 2.0 * e_m, 2.0 * (nd + 1.0)) *
                     std::pow(1.0 - 2.0 * e_x_bar, nd) *
                     std::pow(1.0 - 2.0 * e_z_bar, (2.0 * m - 2.0) * nd);
    pair_errors out;
    out.e_x = (1.0 - u) / 4.0;
    out.e_z = (1.0 - u) / 4.0;
    out.e_y = (1.0 + u) / 4.0 - t / 2.0;
    out.fidelity = 1.0 - (out.e_x + out.e_y + out.e_z);
    return out;
}

scaling_bound scaling_upper_bound(long long n, double p_b, double x) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(p_b > 0.0 && p_b < 1.0)) throw std::invalid_argument("p_b must be in (0, 1)");
    if (!(x > 0.0)) throw std::invalid_argument("x must be > 0");
    const double nd = static_cast<double>(n);
    scaling_bound out;
    out.m_choice = std::log(2.0 * x / (2.0 * x + nd + 1.0)) / std::log1p(-p_b);
    const double p_l = std::pow(1.0 - p_b, x / nd);
    out.q_upp = 2.0 *
                (nd * (std::pow(std::log(1.0 / (1.0 - p_l)), 4.5) + 1.0) + 1.0) *
                std::pow(1.0 + (nd + 1.0) / (2.0 * x), 2.0 * x) *
                std::pow(1.0 + 2.0 * x / (nd + 1.0), nd + 1.0) *
                std::log(2.0 * x / (2.0 * x + nd + 1.0)) / std::log1p(-p_b);
    return out;
}

direct_cost direct_transmission_cost(double l_km, double source_rate_hz,
                                     double l_att_km) {
    if (!(l_km > 0.0) || !(source_rate_hz > 0.0) || !(l_att_km > 0.0)) {
        throw std::invalid_argument("direct_transmission_cost needs positive inputs");
    }
    direct_cost out;
    out.photons = std::exp(l_km / l_att_km);
    out.seconds = out.photons / source_rate_hz;
    return out;
}

double rescale_depolarizing(double e_d_ref, double l0_ref_km, double l0_new_km) {
    if (!(e_d_ref >= 0.0 && e_d_ref <= 0.75)) {
        throw std::invalid_argument("e_d must be within [0, 0.75]");
    }
    if (!(l0_ref_km > 0.0) || !(l0_new_km > 0.0)) {
        throw std::invalid_argument("segment lengths must be > 0");
    }
    const double ratio = l0_new_km / l0_ref_km;
    return 0.75 * (1.0 - std::pow(1.0 - (4.0 / 3.0) * e_d_ref, ratio));
}

long long segment_count(double l_km, double l0_km, bool* exact) {
    if (!(l_km > 0.0) || !(l0_km > 0.0)) {
        throw std::invalid_argument("lengths must be > 0");
    }
    const double segments = l_km / l0_km;
    const long long rounded = std::llround(segments);
    if (exact != nullptr) {
        *exact = std::abs(segments - static_cast<double>(rounded)) <=
                 1e-9 * std::max(1.0, segments);
    }
    return rounded - 1;
}

evaluation evaluate(const config& cfg) {
    validate(cfg);
    evaluation out;
    out.n = segment_count(cfg.link.l_km, cfg.link.l0_km, &out.segments_exact);
    if (out.n < 1) {
        throw std::invalid_argument("link must span at least two segments (n >= 1)");
    }
    const int m = cfg.proto.m;
    out.e_m = tree::measurement_error_from_depolarizing(cfg.link.e_d);
    out.epsilon0 = effective_loss(m, cfg.proto.tree, cfg.hw, cfg.link.l0_km);
    out.tree_metrics = tree::analyze(cfg.proto.tree, out.epsilon0, out.e_m);
    const tree::tree_metrics& tm = out.tree_metrics;
    out.q_l = tm.q_l;
    out.p_z = tm.p_z;
    out.p_x = tm.p_x;
    out.p_general = tm.p_general;
    out.one_minus_p_z = tm.one_minus_p_z;
    out.one_minus_p_x = tm.one_minus_p_x;
    out.one_minus_p_general = tm.one_minus_p_general;
    if (!tm.e_z.has_value() || !tm.e_x.has_value()) {
        throw std::runtime_error("logical error rates are undefined at total loss");
    }
    out.e_z_bar = *tm.e_z;
    out.e_x_bar = *tm.e_x;
    out.p_b = bell_success(out.epsilon0);
    out.p = trial_success(out.p_z, out.p_x, out.p_b, m, out.n);
    out.rate_hz = pair_rate(out.p, cfg.hw.source_rate_hz);
    out.photons_per_trial = photons_per_trial(m, out.n, out.q_l);
    out.photons_per_node_per_trial = 2LL * m * (out.q_l + 1);
    out.q_bar = static_cast<double>(out.photons_per_trial) / out.p;
    out.errors = final_pair_errors(out.e_m, out.e_x_bar, out.e_z_bar, m, out.n);
    out.tau_s = prep::prep_time_star(m, cfg.proto.tree, cfg.hw.tau_a);
    out.tau_c = prep::prep_time_complete(out.tau_s, cfg.hw.tau_a);
    out.t_max = max_photon_lifetime(out.tau_c, cfg.hw.tau_a, cfg.link.l0_km, cfg.hw.c);
    out.t_mem_a = memory_time(memory_strategy::a, cfg.link.l_km, cfg.link.l0_km,
                              cfg.hw.c, cfg.hw.tau_a);
    out.t_mem_b = memory_time(memory_strategy::b, cfg.link.l_km, cfg.link.l0_km,
                              cfg.hw.c, cfg.hw.tau_a);
    return out;
}

} // namespace apqr::model
