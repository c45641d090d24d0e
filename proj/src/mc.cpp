#include "mc.hpp"

#include "parallel.hpp"
#include "rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace apqr::mc {

namespace {

void validate_settings(const settings& st) {
    if (st.trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (!(st.confidence_sigma > 0.0)) {
        throw std::invalid_argument("confidence_sigma must be > 0");
    }
}

estimate make_estimate(uint64_t count, uint64_t trials) {
    estimate e;
    e.count = count;
    e.trials = trials;
    if (trials == 0) return e;
    e.mean = static_cast<double>(count) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
    return e;
}

struct readout {
    bool ok = false;
    bool err = false;
};

// One physical-level sampler for a single tree, shared by the Z and X
// logical measurements. Levels are counted from the root: the root is level
// 0, its b_0 children are level 1, and so on. A qubit at level j has b_j
// children while j <= depth.
class tree_sampler {
  public:
    tree_sampler(const tree::tree_params& t, double epsilon0, double e_m)
        : t_(t), depth_(t.depth()), eps_(epsilon0), e_m_(e_m) {}

    // Majority vote; an even number of votes discards the last one.
    static bool majority(const std::vector<char>& errs) {
        size_t voters = errs.size();
        if (voters % 2 == 0) --voters;
        size_t wrong = 0;
        for (size_t i = 0; i < voters; ++i) wrong += static_cast<size_t>(errs[i]);
        return wrong > voters / 2;
    }

    // Z readout of one qubit at the given level. The indirect result is
    // preferred whenever its subtree succeeds; the direct photon is the
    // fallback. This matches the error bookkeeping of the closed forms,
    // which weight indirect outcomes by R rather than by epsilon * R.
    readout sample_z(rng::stream& g, int level) {
        const bool arrived = g.bernoulli(1.0 - eps_);
        const readout ind = sample_indirect(g, level);
        if (ind.ok) return ind;
        if (arrived) return {true, g.bernoulli(e_m_)};
        return {false, false};
    }

    // Indirect Z measurement on a lost qubit at the given level: each child
    // anchors one scheme (X on the child, Z on all of the child's children)
    // and the surviving schemes vote.
    readout sample_indirect(rng::stream& g, int level) {
        if (level > depth_) return {false, false};
        const int children = t_.branches[static_cast<size_t>(level)];
        const int grandchildren =
            level + 1 <= depth_ ? t_.branches[static_cast<size_t>(level) + 1] : 0;
        std::vector<char> votes;
        for (int c = 0; c < children; ++c) {
            readout s = sample_scheme(g, level + 2, grandchildren);
            if (s.ok) votes.push_back(s.err ? 1 : 0);
        }
        if (votes.empty()) return {false, false};
        return {true, majority(votes)};
    }

    // One scheme: the anchor qubit must have arrived (X measurement), and
    // every one of its children must yield a Z readout.
    readout sample_scheme(rng::stream& g, int child_level, int n_children) {
        if (!g.bernoulli(1.0 - eps_)) return {false, false};
        bool err = g.bernoulli(e_m_);
        for (int q = 0; q < n_children; ++q) {
            readout r = sample_z(g, child_level);
            if (!r.ok) return {false, false};
            err ^= r.err;
        }
        return {true, err};
    }

    // Logical Z: every first-level qubit must be read out; the logical
    // outcome is the parity of the individual outcomes.
    readout logical_z(rng::stream& g) {
        bool err = false;
        for (int q = 0; q < t_.branches[0]; ++q) {
            readout r = sample_z(g, 1);
            if (!r.ok) return {false, false};
            err ^= r.err;
        }
        return {true, err};
    }

    // Logical X: an indirect measurement anchored at the root.
    readout logical_x(rng::stream& g) { return sample_indirect(g, 0); }

  private:
    const tree::tree_params& t_;
    int depth_;
    double eps_;
    double e_m_;
};

} // namespace

tree_result sample_tree_measurement(const tree::tree_params& t, double epsilon0,
                                    double e_m, basis b, const settings& st) {
    tree::validate(t);
    if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) {
        throw std::invalid_argument("epsilon0 must be within [0, 1]");
    }
    if (!(e_m >= 0.0 && e_m <= 0.5)) {
        throw std::invalid_argument("e_m must be within [0, 0.5]");
    }
    validate_settings(st);

    struct tally {
        uint64_t ok = 0;
        uint64_t err = 0;
    };
    std::vector<tally> chunks(par::chunk_count(st.trials));
    par::for_chunks(st.trials, st.threads, [&](size_t ci, uint64_t begin, uint64_t end) {
        tree_sampler sampler(t, epsilon0, e_m);
        tally local;
        for (uint64_t trial = begin; trial < end; ++trial) {
            rng::stream g(st.seed, trial);
            const readout r =
                b == basis::z ? sampler.logical_z(g) : sampler.logical_x(g);
            if (r.ok) {
                ++local.ok;
                local.err += static_cast<uint64_t>(r.err);
            }
        }
        chunks[ci] = local;
    });
    tally total;
    for (const tally& c : chunks) {
        total.ok += c.ok;
        total.err += c.err;
    }
    tree_result out;
    out.success = make_estimate(total.ok, st.trials);
    out.error_given_success = make_estimate(total.err, total.ok);
    return out;
}

repeater_inputs inputs_from(const model::evaluation& ev, int m) {
    repeater_inputs in;
    in.m = m;
    in.n = ev.n;
    in.p_b = ev.p_b;
    in.one_minus_p_z = ev.one_minus_p_z;
    in.one_minus_p_x = ev.one_minus_p_x;
    in.e_z_bar = ev.e_z_bar;
    in.e_x_bar = ev.e_x_bar;
    in.e_m = ev.e_m;
    return in;
}

namespace {

struct pair_tally {
    uint64_t ok = 0;
    uint64_t ex = 0, ey = 0, ez = 0;
};

// Physical Bell-measurement outcome errors: each of the 2(n+1) outcome-bit
// pairs carries X, Y, or Z with probability e_m/2 each, which multiplies
// every Pauli character by (1 - 2 e_m).
void apply_outcome_noise(rng::stream& g, long long n, double e_m, bool& fx, bool& fz) {
    const uint64_t events = g.binomial(static_cast<uint64_t>(2 * (n + 1)), 1.5 * e_m);
    for (uint64_t i = 0; i < events; ++i) {
        const double u = g.uniform();
        if (u < 1.0 / 3.0) {
            fx = !fx; // X
        } else if (u < 2.0 / 3.0) {
            fx = !fx; // Y
            fz = !fz;
        } else {
            fz = !fz; // Z
        }
    }
}

void tally_frame(pair_tally& t, bool fx, bool fz) {
    ++t.ok;
    if (fx && fz) {
        ++t.ey;
    } else if (fx) {
        ++t.ex;
    } else if (fz) {
        ++t.ez;
    }
}

repeater_result finish(const pair_tally& total, uint64_t trials) {
    repeater_result out;
    out.p = make_estimate(total.ok, trials);
    out.e_x = make_estimate(total.ex, total.ok);
    out.e_y = make_estimate(total.ey, total.ok);
    out.e_z = make_estimate(total.ez, total.ok);
    return out;
}

} // namespace

repeater_result sample_repeater(const repeater_inputs& in, const settings& st) {
    if (in.m < 1 || in.n < 1) throw std::invalid_argument("repeater needs m >= 1, n >= 1");
    validate_settings(st);
    const double station_ok =
        1.0 - std::pow(1.0 - in.p_b, static_cast<double>(in.m));
    const uint64_t z_measurements =
        static_cast<uint64_t>(2 * (in.m - 1)) * static_cast<uint64_t>(in.n);
    const uint64_t x_measurements = static_cast<uint64_t>(2 * in.n);

    std::vector<pair_tally> chunks(par::chunk_count(st.trials));
    par::for_chunks(st.trials, st.threads, [&](size_t ci, uint64_t begin, uint64_t end) {
        pair_tally local;
        for (uint64_t trial = begin; trial < end; ++trial) {
            rng::stream g(st.seed, trial);
            bool ok = true;
            for (long long s = 0; s <= in.n && ok; ++s) {
                ok = g.bernoulli(station_ok);
            }
            if (!ok) continue;
            if (g.binomial(z_measurements, in.one_minus_p_z) != 0) continue;
            if (g.binomial(x_measurements, in.one_minus_p_x) != 0) continue;
            // Pauli frame of the delivered pair: logical Z errors act as Y,
            // the two logical X errors per node act as Z and X respectively,
            // and Bell outcome bits depolarize.
            bool fx = false, fz = false;
            const uint64_t y_flips = g.binomial(z_measurements, in.e_z_bar);
            if (y_flips % 2 == 1) {
                fx = !fx;
                fz = !fz;
            }
            const uint64_t z_flips =
                g.binomial(static_cast<uint64_t>(in.n), in.e_x_bar);
            if (z_flips % 2 == 1) fz = !fz;
            const uint64_t x_flips =
                g.binomial(static_cast<uint64_t>(in.n), in.e_x_bar);
            if (x_flips % 2 == 1) fx = !fx;
            apply_outcome_noise(g, in.n, in.e_m, fx, fz);
            tally_frame(local, fx, fz);
        }
        chunks[ci] = local;
    });
    pair_tally total;
    for (const pair_tally& c : chunks) {
        total.ok += c.ok;
        total.ex += c.ex;
        total.ey += c.ey;
        total.ez += c.ez;
    }
    return finish(total, st.trials);
}

repeater_result sample_repeater_physical(const model::config& cfg, const settings& st) {
    validate_settings(st);
    const model::evaluation ev = model::evaluate(cfg);
    const double station_ok =
        1.0 - std::pow(1.0 - ev.p_b, static_cast<double>(cfg.proto.m));
    const int m = cfg.proto.m;

    std::vector<pair_tally> chunks(par::chunk_count(st.trials));
    par::for_chunks(st.trials, st.threads, [&](size_t ci, uint64_t begin, uint64_t end) {
        tree_sampler sampler(cfg.proto.tree, ev.epsilon0, ev.e_m);
        pair_tally local;
        for (uint64_t trial = begin; trial < end; ++trial) {
            rng::stream g(st.seed, trial);
            bool ok = true;
            for (long long s = 0; s <= ev.n && ok; ++s) {
                ok = g.bernoulli(station_ok);
            }
            if (!ok) continue;
            bool fx = false, fz = false;
            for (long long node = 0; node < ev.n && ok; ++node) {
                // 2(m-1) logical Z measurements per node; an error acts as Y.
                for (int i = 0; i < 2 * (m - 1) && ok; ++i) {
                    const readout r = sampler.logical_z(g);
                    ok = r.ok;
                    if (ok && r.err) {
                        fx = !fx;
                        fz = !fz;
                    }
                }
                if (!ok) break;
                // Two logical X measurements per node: the errors of the
                // two kept arms propagate as Z and X respectively.
                readout rz = sampler.logical_x(g);
                readout rx = sampler.logical_x(g);
                ok = rz.ok && rx.ok;
                if (!ok) break;
                if (rz.err) fz = !fz;
                if (rx.err) fx = !fx;
            }
            if (!ok) continue;
            apply_outcome_noise(g, ev.n, ev.e_m, fx, fz);
            tally_frame(local, fx, fz);
        }
        chunks[ci] = local;
    });
    pair_tally total;
    for (const pair_tally& c : chunks) {
        total.ok += c.ok;
        total.ex += c.ex;
        total.ey += c.ey;
        total.ez += c.ez;
    }
    return finish(total, st.trials);
}

verdict compare(double analytic, const estimate& est, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (est.std_error == 0.0) {
        return analytic == est.mean ? verdict::consistent : verdict::inconsistent;
    }
    return std::abs(analytic - est.mean) <= sigma * est.std_error
               ? verdict::consistent
               : verdict::inconsistent;
}

} // namespace apqr::mc
