#include "statevec.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace apqr::sv {

namespace {

void check_qubit_count(int n) {
    if (n < 1 || n > max_statevec_qubits) {
        throw std::invalid_argument("statevector register must be within [1, 14] qubits");
    }
}

std::complex<double> i_power(unsigned k) {
    switch (k & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

state::state(int n) : n_(n), amp_(size_t{1} << n) { check_qubit_count(n); }

state state::plus_state(int n) {
    state s(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(size_t{1} << n));
    for (auto& c : s.amp_) c = a;
    return s;
}

state state::graph_state(const stab::graph& g) {
    stab::validate(g);
    if (g.n > max_statevec_qubits) {
        throw std::invalid_argument("graph too large for the statevector backend");
    }
    state s = plus_state(g.n);
    for (const auto& [a, b] : g.edges) s.apply_cz(a, b);
    return s;
}

void state::apply_cz(int a, int b) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
        throw std::invalid_argument("bad qubit pair");
    }
    const size_t ma = size_t{1} << a, mb = size_t{1} << b;
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        if ((idx & ma) != 0 && (idx & mb) != 0) amp_[idx] = -amp_[idx];
    }
}

void state::apply_h(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    const size_t m = size_t{1} << q;
    const double inv = 1.0 / std::sqrt(2.0);
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        if ((idx & m) != 0) continue;
        const std::complex<double> a0 = amp_[idx], a1 = amp_[idx | m];
        amp_[idx] = (a0 + a1) * inv;
        amp_[idx | m] = (a0 - a1) * inv;
    }
}

void state::apply_s(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    const size_t m = size_t{1} << q;
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        if ((idx & m) != 0) amp_[idx] *= std::complex<double>(0.0, 1.0);
    }
}

void state::apply_sdg(int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("qubit index out of range");
    const size_t m = size_t{1} << q;
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        if ((idx & m) != 0) amp_[idx] *= std::complex<double>(0.0, -1.0);
    }
}

void state::apply_pauli(const stab::pauli& p) {
    const uint32_t mask = n_ >= 32 ? 0xffffffffu : ((1u << n_) - 1u);
    if (((p.x | p.z) & ~mask) != 0) {
        throw std::invalid_argument("pauli touches qubits outside the register");
    }
    // i^phase * (Y as literal) = i^(phase + |x&z|) * X-layer * Z-layer.
    const std::complex<double> coeff =
        i_power(p.phase + static_cast<unsigned>(std::popcount(p.x & p.z)));
    std::vector<std::complex<double>> out(amp_.size());
    const size_t x = p.x, z = p.z;
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        const double sign = (std::popcount(idx & z) & 1) != 0 ? -1.0 : 1.0;
        out[idx ^ x] = coeff * sign * amp_[idx];
    }
    amp_ = std::move(out);
}

double state::project(const stab::pauli& obs, int outcome) {
    if (obs.phase % 2 != 0) throw std::invalid_argument("observable must be hermitian");
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    state applied = *this;
    applied.apply_pauli(obs);
    const double s = outcome == 0 ? 1.0 : -1.0;
    std::vector<std::complex<double>> next(amp_.size());
    double prob = 0.0;
    for (size_t idx = 0; idx < amp_.size(); ++idx) {
        next[idx] = 0.5 * (amp_[idx] + s * applied.amp_[idx]);
        prob += std::norm(next[idx]);
    }
    if (prob > 1e-12) {
        const double inv = 1.0 / std::sqrt(prob);
        for (auto& c : next) c *= inv;
        amp_ = std::move(next);
    }
    return prob;
}

state state::remove_qubits(uint32_t removed_mask) const {
    const uint32_t reg_mask = n_ >= 32 ? 0xffffffffu : ((1u << n_) - 1u);
    if (removed_mask == 0 || (removed_mask & ~reg_mask) != 0 || removed_mask == reg_mask) {
        throw std::invalid_argument("must remove a proper non-empty qubit subset");
    }
    const int kept_n = n_ - std::popcount(removed_mask);
    std::vector<int> kept_bits, removed_bits;
    for (int q = 0; q < n_; ++q) {
        if (((removed_mask >> q) & 1u) != 0) removed_bits.push_back(q);
        else kept_bits.push_back(q);
    }
    auto combine = [&](size_t r, size_t k) {
        size_t idx = 0;
        for (size_t i = 0; i < removed_bits.size(); ++i) {
            if (((r >> i) & 1u) != 0) idx |= size_t{1} << removed_bits[i];
        }
        for (size_t i = 0; i < kept_bits.size(); ++i) {
            if (((k >> i) & 1u) != 0) idx |= size_t{1} << kept_bits[i];
        }
        return idx;
    };
    const size_t nr = size_t{1} << removed_bits.size();
    const size_t nk = size_t{1} << kept_n;
    // Anchor on the largest amplitude, then verify the product structure.
    size_t r0 = 0, k0 = 0;
    double best = -1.0;
    for (size_t r = 0; r < nr; ++r) {
        for (size_t k = 0; k < nk; ++k) {
            const double mag = std::abs(amp_[combine(r, k)]);
            if (mag > best) {
                best = mag;
                r0 = r;
                k0 = k;
            }
        }
    }
    if (best <= 1e-12) throw std::runtime_error("cannot factor a zero state");
    const std::complex<double> anchor = amp_[combine(r0, k0)];
    state out(kept_n);
    double norm2 = 0.0;
    for (size_t k = 0; k < nk; ++k) {
        out.amp_[k] = amp_[combine(r0, k)];
        norm2 += std::norm(out.amp_[k]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : out.amp_) c *= inv;
    for (size_t r = 0; r < nr; ++r) {
        const std::complex<double> u = amp_[combine(r, k0)] / anchor;
        for (size_t k = 0; k < nk; ++k) {
            const std::complex<double> expect = u * amp_[combine(r0, k)];
            if (std::abs(expect - amp_[combine(r, k)]) > 1e-9) {
                throw std::runtime_error("state does not factor over the removed qubits");
            }
        }
    }
    return out;
}

double state::norm() const {
    double s = 0.0;
    for (const auto& c : amp_) s += std::norm(c);
    return std::sqrt(s);
}

bool equal_up_to_phase(const state& a, const state& b, double tol) {
    if (a.num_qubits() != b.num_qubits()) return false;
    const auto& aa = a.amplitudes();
    const auto& bb = b.amplitudes();
    size_t anchor = 0;
    double best = -1.0;
    for (size_t idx = 0; idx < aa.size(); ++idx) {
        if (std::abs(aa[idx]) > best) {
            best = std::abs(aa[idx]);
            anchor = idx;
        }
    }
    if (best <= tol) return false;
    if (std::abs(bb[anchor]) <= tol) return false;
    const std::complex<double> phase = bb[anchor] / aa[anchor];
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    for (size_t idx = 0; idx < aa.size(); ++idx) {
        if (std::abs(bb[idx] - phase * aa[idx]) > tol) return false;
    }
    return true;
}

bool equal_exact(const state& a, const state& b, double tol) {
    if (a.num_qubits() != b.num_qubits()) return false;
    const auto& aa = a.amplitudes();
    const auto& bb = b.amplitudes();
    for (size_t idx = 0; idx < aa.size(); ++idx) {
        if (std::abs(bb[idx] - aa[idx]) > tol) return false;
    }
    return true;
}

} // namespace apqr::sv
