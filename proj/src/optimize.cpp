#include "optimize.hpp"

#include "parallel.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace apqr::search {

namespace {

void validate_space(const space& s) {
    if (s.branch_ranges.empty()) {
        throw std::invalid_argument("search space needs at least one branch range");
    }
    auto check_range = [](const int_range& r, const char* what, int cap) {
        if (r.lo < 1 || r.hi < r.lo) {
            throw std::invalid_argument(std::string(what) + " range must satisfy 1 <= lo <= hi");
        }
        if (r.hi > cap) {
            throw std::invalid_argument(std::string(what) + " range exceeds the supported cap");
        }
    };
    check_range(s.m_range, "m", 4096);
    for (const int_range& r : s.branch_ranges) check_range(r, "branch", 64);
    for (const auto& c : {s.cons.min_fidelity, s.cons.max_epsilon0}) {
        if (c.has_value() && !(*c >= 0.0 && *c <= 1.0)) {
            throw std::invalid_argument("fidelity/loss constraints must be within [0, 1]");
        }
    }
    if (s.cons.min_rate_hz.has_value() && !(*s.cons.min_rate_hz >= 0.0)) {
        throw std::invalid_argument("min_rate_hz must be >= 0");
    }
}

// Lexicographic candidate order used for tie-breaking.
bool candidate_less(const candidate& a, const candidate& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.branches < b.branches;
}

// Primary objective with deterministic tie-breaks.
bool better(const scored& a, const scored& b) {
    if (a.eval.q_bar != b.eval.q_bar) return a.eval.q_bar < b.eval.q_bar;
    return candidate_less(a.cand, b.cand);
}

// How far an infeasible candidate misses the constraint set; used only to
// report the closest miss when nothing qualifies.
double violation(const model::evaluation& ev, const constraints& cons) {
    double v = 0.0;
    if (ev.epsilon0 >= 0.5) v += (ev.epsilon0 - 0.5) / 0.5;
    if (cons.min_fidelity && ev.errors.fidelity < *cons.min_fidelity) {
        v += (*cons.min_fidelity - ev.errors.fidelity) / *cons.min_fidelity;
    }
    if (cons.min_rate_hz && *cons.min_rate_hz > 0.0 && ev.rate_hz < *cons.min_rate_hz) {
        v += (*cons.min_rate_hz - ev.rate_hz) / *cons.min_rate_hz;
    }
    if (cons.max_epsilon0 && *cons.max_epsilon0 > 0.0 && ev.epsilon0 > *cons.max_epsilon0) {
        v += (ev.epsilon0 - *cons.max_epsilon0) / *cons.max_epsilon0;
    }
    return v;
}

bool feasible(const model::evaluation& ev, const constraints& cons) {
    if (ev.epsilon0 >= 0.5) return false;
    if (cons.min_fidelity && ev.errors.fidelity < *cons.min_fidelity) return false;
    if (cons.min_rate_hz && ev.rate_hz < *cons.min_rate_hz) return false;
    if (cons.max_epsilon0 && ev.epsilon0 > *cons.max_epsilon0) return false;
    return true;
}

struct chunk_state {
    std::optional<scored> best;
    std::optional<std::pair<double, scored>> best_infeasible;
    std::map<int, scored> frontier; // best feasible candidate per m
    uint64_t feasible_count = 0;
    uint64_t evaluated = 0;
};

} // namespace

uint64_t candidate_count(const space& s) {
    unsigned __int128 total = static_cast<uint64_t>(s.m_range.hi - s.m_range.lo + 1);
    for (const int_range& r : s.branch_ranges) {
        total *= static_cast<uint64_t>(r.hi - r.lo + 1);
        if (total > max_candidates) return max_candidates + 1;
    }
    return static_cast<uint64_t>(total);
}

result optimize(const space& s, const model::hardware_params& hw,
                const model::link_params& link, int threads) {
    validate_space(s);
    model::validate(hw);
    model::validate(link);
    if (model::segment_count(link.l_km, link.l0_km) < 1) {
        throw std::invalid_argument("link must span at least two segments (n >= 1)");
    }
    const uint64_t total = candidate_count(s);
    if (total > max_candidates) {
        throw std::invalid_argument("search space exceeds the candidate cap");
    }

    const size_t levels = s.branch_ranges.size();
    std::vector<uint64_t> dim(levels);
    for (size_t i = 0; i < levels; ++i) {
        dim[i] = static_cast<uint64_t>(s.branch_ranges[i].hi - s.branch_ranges[i].lo + 1);
    }

    // Decode a flat index into (m, b_0..b_l); flat order equals lexicographic
    // candidate order, so chunked scanning stays deterministic.
    auto decode = [&](uint64_t flat, candidate& c) {
        for (size_t i = levels; i-- > 0;) {
            c.branches[i] = s.branch_ranges[i].lo + static_cast<int>(flat % dim[i]);
            flat /= dim[i];
        }
        c.m = s.m_range.lo + static_cast<int>(flat);
    };

    std::vector<chunk_state> chunks(par::chunk_count(total));
    par::for_chunks(total, threads, [&](size_t chunk_idx, uint64_t begin, uint64_t end) {
        chunk_state local;
        candidate c;
        c.branches.assign(levels, 1);
        model::config cfg;
        cfg.hw = hw;
        cfg.link = link;
        for (uint64_t flat = begin; flat < end; ++flat) {
            decode(flat, c);
            cfg.proto.m = c.m;
            cfg.proto.tree.branches = c.branches;
            ++local.evaluated;
            model::evaluation ev;
            try {
                ev = model::evaluate(cfg);
            } catch (const std::exception&) {
                continue; // out-of-domain candidate (e.g. photon count overflow)
            }
            scored sc{c, std::move(ev)};
            if (feasible(sc.eval, s.cons)) {
                ++local.feasible_count;
                auto it = local.frontier.find(c.m);
                if (it == local.frontier.end()) {
                    local.frontier.emplace(c.m, sc);
                } else if (better(sc, it->second)) {
                    it->second = sc;
                }
                if (!local.best || better(sc, *local.best)) local.best = std::move(sc);
            } else {
                const double v = violation(sc.eval, s.cons);
                if (!local.best_infeasible || v < local.best_infeasible->first ||
                    (v == local.best_infeasible->first &&
                     better(sc, local.best_infeasible->second))) {
                    local.best_infeasible = {v, std::move(sc)};
                }
            }
        }
        chunks[chunk_idx] = std::move(local);
    });

    result out;
    std::map<int, scored> frontier;
    std::optional<std::pair<double, scored>> best_inf;
    for (chunk_state& ch : chunks) {
        out.evaluated += ch.evaluated;
        out.feasible += ch.feasible_count;
        if (ch.best && (!out.found || better(*ch.best, out.best))) {
            out.best = std::move(*ch.best);
            out.found = true;
        }
        for (auto& [m, sc] : ch.frontier) {
            auto it = frontier.find(m);
            if (it == frontier.end()) {
                frontier.emplace(m, std::move(sc));
            } else if (better(sc, it->second)) {
                it->second = std::move(sc);
            }
        }
        if (ch.best_infeasible &&
            (!best_inf || ch.best_infeasible->first < best_inf->first ||
             (ch.best_infeasible->first == best_inf->first &&
              better(ch.best_infeasible->second, best_inf->second)))) {
            best_inf = std::move(ch.best_infeasible);
        }
    }
    for (auto& [m, sc] : frontier) {
        (void)m;
        out.frontier.push_back(std::move(sc));
    }
    if (!out.found && best_inf) out.best_infeasible = std::move(best_inf->second);
    return out;
}

std::vector<sweep_row> sweep(const std::vector<sweep_cell>& cells, const space& s,
                             const model::hardware_params& hw,
                             const model::link_params& link, int threads) {
    if (cells.empty()) throw std::invalid_argument("sweep needs at least one grid cell");
    std::vector<sweep_row> rows;
    rows.reserve(cells.size());
    for (const sweep_cell& cell : cells) {
        sweep_row row;
        row.cell = cell;
        model::link_params cell_link = link;
        cell_link.l_km = cell.l_km;
        cell_link.l0_km = cell.l0_km;
        if (cell.e_d.has_value()) cell_link.e_d = *cell.e_d;
        try {
            row.res = optimize(s, hw, cell_link, threads);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace apqr::search
