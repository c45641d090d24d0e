#include "prep.hpp"

#include <cmath>
#include <stdexcept>

namespace apqr::prep {

void validate(const source_params& p) {
    if (!(p.eta_s > 0.0 && p.eta_s <= 1.0) || !(p.eta_d > 0.0 && p.eta_d <= 1.0)) {
        throw std::invalid_argument("source and detector efficiencies must be in (0, 1]");
    }
}

double polynomial::eval(double x) const {
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

double prep_time_star(int m, const tree::tree_params& t, double tau_a) {
    tree::validate(t);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (!(tau_a >= 0.0)) throw std::invalid_argument("tau_a must be >= 0");
    // log2(2m) merge rounds for the arms, log2(b_i) per tree level, one
    // attachment step per level, plus four fixed pipeline stages.
    double steps = std::log2(2.0 * m) + static_cast<double>(t.depth()) + 4.0;
    for (int b : t.branches) steps += std::log2(static_cast<double>(b));
    return steps * tau_a;
}

double prep_time_complete(double tau_s, double tau_a) { return tau_s + tau_a; }

ghz_stats ghz_source_stats(const source_params& p) {
    validate(p);
    const double es = p.eta_s;
    const double ed = p.eta_d;
    ghz_stats out;
    out.success = ed * ed * ed * es * es * es * std::pow(2.0 - ed * es, 3.0) / 32.0;
    out.effective_loss = 1.0 - es / (2.0 - ed * es);
    return out;
}

fusion_bounds fusion_success_bounds(const source_params& p, double p_tau_a,
                                    double steps) {
    validate(p);
    if (!(p_tau_a >= 0.0 && p_tau_a <= 1.0)) {
        throw std::invalid_argument("p_tau_a must be within [0, 1]");
    }
    if (!(steps >= 0.0)) throw std::invalid_argument("steps must be >= 0");
    const double ss = p.eta_s * p.eta_d;
    fusion_bounds out;
    out.upper = ss * ss / (2.0 * (2.0 - ss) * (2.0 - ss));
    out.lower = out.upper * std::pow(p_tau_a, steps);
    return out;
}

double star_state_photon_bound(int m, const tree::tree_params& t,
                               const source_params& p, double p2,
                               const polynomial& poly) {
    tree::validate(t);
    validate(p);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (!(p2 > 0.0 && p2 <= 1.0)) {
        throw std::invalid_argument("fusion success probability must be in (0, 1]");
    }
    const double es = p.eta_s;
    const double ed = p.eta_d;
    const int l = t.depth();
    // 6 photons per GHZ attempt, 1/32 ideal heralding rate, and a factor 2
    // from assembling arms pairwise.
    const double prefactor =
        2.0 * 6.0 * 32.0 / (es * es * es * ed * ed * ed * std::pow(2.0 - es * ed, 3.0));
    double out = prefactor / std::pow(p2, static_cast<double>(2 * l + 4)) *
                 poly.eval(2.0 * static_cast<double>(m));
    for (int b : t.branches) out *= poly.eval(static_cast<double>(b));
    return out;
}

double complete_state_photon_bound(double q_s, int m, const source_params& p,
                                   double p_tau_a, double steps) {
    validate(p);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (!(q_s >= 0.0)) throw std::invalid_argument("q_s must be >= 0");
    if (!(p_tau_a > 0.0 && p_tau_a <= 1.0)) {
        throw std::invalid_argument("p_tau_a must be in (0, 1]");
    }
    if (!(steps >= 0.0)) throw std::invalid_argument("steps must be >= 0");
    const double ss = p.eta_s * p.eta_d;
    const double p_pow = std::pow(p_tau_a, steps);
    return std::pow((2.0 - ss) / (ss * p_pow), static_cast<double>(4 * m + 2)) * q_s;
}

prep_estimate estimate(int m, const tree::tree_params& t, const source_params& p,
                       double tau_a, double p_tau_a, const polynomial& poly) {
    prep_estimate out;
    out.tau_s = prep_time_star(m, t, tau_a);
    out.tau_c = prep_time_complete(out.tau_s, tau_a);
    const ghz_stats g = ghz_source_stats(p);
    out.ghz_success = g.success;
    out.ghz_effective_loss = g.effective_loss;
    const double steps = tau_a > 0.0 ? out.tau_s / tau_a : 0.0;
    const fusion_bounds f = fusion_success_bounds(p, p_tau_a, 2.0 * steps);
    out.p2_lower = f.lower;
    out.p2_upper = f.upper;
    out.q_s_bound = star_state_photon_bound(m, t, p, out.p2_lower, poly);
    out.q_c_bound = complete_state_photon_bound(out.q_s_bound, m, p, p_tau_a, steps);
    return out;
}

} // namespace apqr::prep
