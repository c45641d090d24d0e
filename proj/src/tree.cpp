#include "tree.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace apqr::tree {

namespace {

// Largest branch value accepted by the error analytics; keeps binomial
// coefficients exactly representable (C(64,32) < 2^63).
constexpr int max_branch_for_errors = 64;

// Exact binomial coefficient, returned as double.
double comb(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    }
    return static_cast<double>(static_cast<uint64_t>(c));
}

void check_probability(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be within [0, 1]");
    }
}

void check_error_rate(double e_m) {
    if (!(e_m >= 0.0 && e_m <= 0.5)) {
        throw std::invalid_argument("e_m must be within [0, 0.5]");
    }
}

void check_branch_cap(const tree_params& t) {
    for (int b : t.branches) {
        if (b > max_branch_for_errors) {
            throw std::invalid_argument(
                "branch values above 64 are not supported by the error analytics");
        }
    }
}

// Branch count at level k; zero past the last level.
int branch_at(const tree_params& t, int k) {
    if (k < 0 || k > t.depth()) return 0;
    return t.branches[static_cast<size_t>(k)];
}

// Probability that a majority vote over mk outcomes, each independently
// flipped with probability e, reports the wrong value. An even number of
// votes is broken by discarding one outcome.
double majority_vote_error(double e, int mk) {
    int n = (mk % 2 == 1) ? mk : mk - 1;
    int lo = (n + 1) / 2;
    double total = 0.0;
    for (int j = lo; j <= n; ++j) {
        total += comb(n, j) * std::pow(e, static_cast<double>(j)) *
                 std::pow(1.0 - e, static_cast<double>(n - j));
    }
    return total;
}

// R_0..R_{l+2} with the two trailing zeros kept for recursion convenience.
std::vector<double> r_profile_full(const tree_params& t, double eps) {
    const int l = t.depth();
    std::vector<double> r(static_cast<size_t>(l) + 3, 0.0);
    for (int k = l; k >= 0; --k) {
        const double s_k = (1.0 - eps) *
                           std::pow(1.0 - eps + eps * r[static_cast<size_t>(k) + 2],
                                    static_cast<double>(branch_at(t, k + 1)));
        r[static_cast<size_t>(k)] =
            1.0 - std::pow(1.0 - s_k, static_cast<double>(t.branches[static_cast<size_t>(k)]));
    }
    return r;
}

// Complements 1-R_k computed in log space so they stay accurate when the
// per-photon loss is very small.
std::vector<double> r_complement_full(const tree_params& t, double eps) {
    const int l = t.depth();
    std::vector<double> rc(static_cast<size_t>(l) + 3, 1.0);
    if (eps >= 1.0) return rc; // every measurement is lost; all complements are 1
    for (int k = l; k >= 0; --k) {
        const double ln_s = std::log1p(-eps) +
                            static_cast<double>(branch_at(t, k + 1)) *
                                std::log1p(-eps * rc[static_cast<size_t>(k) + 2]);
        const double one_minus_s = -std::expm1(ln_s);
        rc[static_cast<size_t>(k)] =
            std::pow(one_minus_s, static_cast<double>(t.branches[static_cast<size_t>(k)]));
    }
    return rc;
}

// Conditional error probabilities of successful indirect measurements,
// ebar_{I_0}..ebar_{I_l}, with two trailing zero-like entries for recursion.
std::vector<std::optional<double>> err_profile_full(const tree_params& t, double eps,
                                                    double e_m) {
    const int l = t.depth();
    const std::vector<double> r = r_profile_full(t, eps);
    std::vector<std::optional<double>> e_i(static_cast<size_t>(l) + 3, std::nullopt);
    for (int k = l; k >= 0; --k) {
        const int bk1 = branch_at(t, k + 1);
        double e_deep = 0.0;
        if (k + 2 <= l) {
            if (!e_i[static_cast<size_t>(k) + 2].has_value()) continue; // stays absent
            e_deep = *e_i[static_cast<size_t>(k) + 2];
        }
        const double r_next = r[static_cast<size_t>(k) + 2];
        const double denom = 1.0 - eps + eps * r_next;
        const double w_ind = denom > 0.0 ? r_next / denom : 0.0;
        // Error of one indirect-measurement scheme: the X outcome on the
        // child plus the parity of its b_{k+1} children, each of which was
        // read out either directly or through a deeper indirect measurement.
        double e_b = 0.0;
        for (int lk = 0; lk <= bk1; ++lk) {
            const double w = comb(bk1, lk) *
                             std::pow(1.0 - w_ind, static_cast<double>(lk)) *
                             std::pow(w_ind, static_cast<double>(bk1 - lk));
            const double par =
                (1.0 - std::pow(1.0 - 2.0 * e_m, static_cast<double>(1 + lk)) *
                           std::pow(1.0 - 2.0 * e_deep, static_cast<double>(bk1 - lk))) /
                2.0;
            e_b += w * par;
        }
        const double s_k = (1.0 - eps) * std::pow(denom, static_cast<double>(bk1));
        const int bk = t.branches[static_cast<size_t>(k)];
        const double r_k = 1.0 - std::pow(1.0 - s_k, static_cast<double>(bk));
        if (r_k == 0.0) continue; // no successful measurement to condition on
        double total = 0.0;
        for (int mk = 1; mk <= bk; ++mk) {
            total += comb(bk, mk) * std::pow(s_k, static_cast<double>(mk)) *
                     std::pow(1.0 - s_k, static_cast<double>(bk - mk)) *
                     majority_vote_error(e_b, mk);
        }
        e_i[static_cast<size_t>(k)] = total / r_k;
    }
    e_i.resize(static_cast<size_t>(l) + 1);
    return e_i;
}

std::optional<double> e_z_from_parts(const tree_params& t, double eps,
                                     double e_m, const std::vector<double>& r,
                                     const std::vector<std::optional<double>>& e_i) {
    const int l = t.depth();
    double e1 = 0.0;
    if (l >= 1) {
        if (!e_i[1].has_value()) return std::nullopt;
        e1 = *e_i[1];
    }
    const int b0 = t.branches[0];
    const double denom = 1.0 - eps + eps * r[1];
    const double w_ind = denom > 0.0 ? r[1] / denom : 0.0;
    // Parity of the b_0 first-level outcomes; direct readouts contribute one
    // physical flip channel each, indirect ones their conditional error.
    double out = 0.0;
    for (int lk = 0; lk <= b0; ++lk) {
        const double w = comb(b0, lk) * std::pow(1.0 - w_ind, static_cast<double>(lk)) *
                         std::pow(w_ind, static_cast<double>(b0 - lk));
        const double par = (1.0 - std::pow(1.0 - 2.0 * e_m, static_cast<double>(lk)) *
                                      std::pow(1.0 - 2.0 * e1, static_cast<double>(b0 - lk))) /
                           2.0;
        out += w * par;
    }
    return out;
}

} // namespace

void validate(const tree_params& t) {
    if (t.branches.empty()) {
        throw std::invalid_argument("tree must have at least one level");
    }
    for (int b : t.branches) {
        if (b < 1) throw std::invalid_argument("tree branch values must be >= 1");
    }
}

long long tree_qubit_count(const tree_params& t) {
    validate(t);
    long long total = 0;
    long long level = 1;
    for (int b : t.branches) {
        if (__builtin_mul_overflow(level, static_cast<long long>(b), &level) ||
            __builtin_add_overflow(total, level, &total)) {
            throw std::overflow_error("tree qubit count exceeds the 64-bit range");
        }
    }
    return total;
}

std::vector<double> indirect_success_profile(const tree_params& t, double epsilon0) {
    validate(t);
    check_probability(epsilon0, "epsilon0");
    std::vector<double> r = r_profile_full(t, epsilon0);
    r.resize(static_cast<size_t>(t.depth()) + 2);
    return r;
}

double loss_tolerant_success_general(const tree_params& t, double epsilon0) {
    validate(t);
    check_probability(epsilon0, "epsilon0");
    const std::vector<double> r = r_profile_full(t, epsilon0);
    const int l = t.depth();
    const int b0 = t.branches[0];
    const int b1 = l >= 1 ? t.branches[1] : 0;
    const double eps = epsilon0;
    return (std::pow(1.0 - eps + eps * r[1], static_cast<double>(b0)) -
            std::pow(eps * r[1], static_cast<double>(b0))) *
           std::pow(1.0 - eps + eps * r[2], static_cast<double>(b1));
}

double loss_tolerant_success_z(const tree_params& t, double epsilon0) {
    validate(t);
    check_probability(epsilon0, "epsilon0");
    const std::vector<double> r = r_profile_full(t, epsilon0);
    return std::pow(1.0 - epsilon0 + epsilon0 * r[1],
                    static_cast<double>(t.branches[0]));
}

double loss_tolerant_success_x(const tree_params& t, double epsilon0) {
    validate(t);
    check_probability(epsilon0, "epsilon0");
    return r_profile_full(t, epsilon0)[0];
}

double measurement_error_from_depolarizing(double e_d) {
    if (!(e_d >= 0.0 && e_d <= 0.75)) {
        throw std::invalid_argument("e_d must be within [0, 0.75]");
    }
    return (2.0 / 3.0) * e_d;
}

std::vector<std::optional<double>> indirect_error_profile(const tree_params& t,
                                                          double epsilon0, double e_m) {
    validate(t);
    check_branch_cap(t);
    check_probability(epsilon0, "epsilon0");
    check_error_rate(e_m);
    return err_profile_full(t, epsilon0, e_m);
}

std::optional<double> loss_tolerant_error_z(const tree_params& t, double epsilon0,
                                            double e_m) {
    validate(t);
    check_branch_cap(t);
    check_probability(epsilon0, "epsilon0");
    check_error_rate(e_m);
    return e_z_from_parts(t, epsilon0, e_m, r_profile_full(t, epsilon0),
                          err_profile_full(t, epsilon0, e_m));
}

std::optional<double> loss_tolerant_error_x(const tree_params& t, double epsilon0,
                                            double e_m) {
    validate(t);
    check_branch_cap(t);
    check_probability(epsilon0, "epsilon0");
    check_error_rate(e_m);
    return err_profile_full(t, epsilon0, e_m)[0];
}

double level_scheme_success(const tree_params& t, double epsilon0, int k) {
    validate(t);
    check_probability(epsilon0, "epsilon0");
    if (k < 0 || k > t.depth()) {
        throw std::invalid_argument("level index out of range");
    }
    const std::vector<double> r = r_profile_full(t, epsilon0);
    return (1.0 - epsilon0) *
           std::pow(1.0 - epsilon0 + epsilon0 * r[static_cast<size_t>(k) + 2],
                    static_cast<double>(branch_at(t, k + 1)));
}

tree_metrics analyze(const tree_params& t, double epsilon0, double e_m) {
    validate(t);
    check_branch_cap(t);
    check_probability(epsilon0, "epsilon0");
    check_error_rate(e_m);
    const int l = t.depth();
    const double eps = epsilon0;

    tree_metrics out;
    out.q_l = tree_qubit_count(t);

    const std::vector<double> r = r_profile_full(t, eps);
    const std::vector<double> rc = r_complement_full(t, eps);
    out.r_profile.assign(r.begin(), r.begin() + l + 2);
    out.r_complement.assign(rc.begin(), rc.begin() + l + 2);

    const int b0 = t.branches[0];
    const int b1 = l >= 1 ? t.branches[1] : 0;
    out.p_z = std::pow(1.0 - eps + eps * r[1], static_cast<double>(b0));
    out.p_x = r[0];
    out.p_general = (out.p_z - std::pow(eps * r[1], static_cast<double>(b0))) *
                    std::pow(1.0 - eps + eps * r[2], static_cast<double>(b1));

    out.one_minus_p_z =
        eps >= 1.0 ? 1.0
                   : -std::expm1(static_cast<double>(b0) * std::log1p(-eps * rc[1]));
    out.one_minus_p_x = rc[0];
    // 1 - A*B = (1-A) + A*(1-B) with A the root factor and B the level-1 factor.
    const double one_minus_a = out.one_minus_p_z + std::pow(eps * r[1], static_cast<double>(b0));
    const double one_minus_b =
        eps >= 1.0 ? (b1 > 0 ? 1.0 : 0.0)
                   : -std::expm1(static_cast<double>(b1) * std::log1p(-eps * rc[2]));
    out.one_minus_p_general = one_minus_a + (1.0 - one_minus_a) * one_minus_b;

    out.err_profile = err_profile_full(t, eps, e_m);
    out.e_x = out.err_profile[0];
    out.e_z = e_z_from_parts(t, eps, e_m, r, out.err_profile);
    return out;
}

} // namespace apqr::tree
