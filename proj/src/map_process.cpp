#include "msvol/map_process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msvol {

namespace {

std::string pair_label(int i, int j) {
    return std::to_string(i + 1) + "->" + std::to_string(j + 1);
}

}  // namespace

SwitchJumpTable::SwitchJumpTable(int n_states) : n_(n_states) {
    if (n_states <= 0) throw std::invalid_argument("SwitchJumpTable: n_states must be positive");
    laws_.resize(static_cast<std::size_t>(n_) * n_);
}

void SwitchJumpTable::set(int from, int to, SwitchJumpLaw law) {
    if (from < 0 || from >= n_ || to < 0 || to >= n_)
        throw std::out_of_range("SwitchJumpTable::set: state index out of range");
    if (from == to)
        throw std::invalid_argument("SwitchJumpTable::set: no switch jump on the diagonal");
    laws_[static_cast<std::size_t>(from) * n_ + to] = law;
}

const SwitchJumpLaw& SwitchJumpTable::at(int from, int to) const {
    return laws_[static_cast<std::size_t>(from) * n_ + to];
}

bool SwitchJumpTable::all_zero() const {
    for (const auto& law : laws_)
        if (!law.is_zero()) return false;
    return true;
}

bool SwitchJumpTable::eta_all_zero() const {
    for (const auto& law : laws_)
        if (!law.eta.is_zero()) return false;
    return true;
}

bool SwitchJumpTable::xi_all_zero() const {
    for (const auto& law : laws_)
        if (!law.xi.is_zero()) return false;
    return true;
}

void SwitchJumpTable::require_nonnegative_eta() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j && !at(i, j).eta.nonnegative())
                throw std::invalid_argument("switch jump " + pair_label(i, j) +
                                            ": eta law must be supported on [0, inf)");
}

void SwitchJumpTable::require_nonnegative_xi() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (i != j && !at(i, j).xi.nonnegative())
                throw std::invalid_argument("switch jump " + pair_label(i, j) +
                                            ": xi law must be supported on [0, inf)");
}

Matrix f_matrix(const GeneratorMatrix& q, const SwitchJumpTable& table, int k, int n) {
    const int nn = q.size();
    if (table.n_states() != nn)
        throw std::invalid_argument("f_matrix: table size does not match generator");
    if (k < 0 || n < 0) throw std::invalid_argument("f_matrix: k and n must be >= 0");
    Matrix f(nn, nn);
    for (int i = 0; i < nn; ++i) {
        for (int j = 0; j < nn; ++j) {
            if (i == j || q.rate(i, j) <= 0.0) continue;
            const SwitchJumpLaw& law = table.at(i, j);
            if (!law.xi.mgf_finite(-static_cast<double>(k)))
                throw std::domain_error("f_matrix: E[exp(-k xi)] infinite for pair " +
                                        pair_label(i, j));
            f(i, j) = law.xi.mgf(-static_cast<double>(k)) * law.eta.moment(n);
        }
    }
    return f;
}

Matrix matrix_exponent(const Vector& psi_diag, const GeneratorMatrix& q,
                       const SwitchJumpTable& table, double w) {
    const int n = q.size();
    if (static_cast<int>(psi_diag.size()) != n)
        throw std::invalid_argument("matrix_exponent: psi_diag size mismatch");
    if (table.n_states() != n)
        throw std::invalid_argument("matrix_exponent: table size does not match generator");
    Matrix psi(n, n);
    for (int i = 0; i < n; ++i) {
        psi(i, i) = psi_diag[i] + q.rate(i, i);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double rate = q.rate(j, i);
            if (rate <= 0.0) continue;
            const JumpLaw& xi = table.at(j, i).xi;
            if (!xi.mgf_finite(w))
                throw std::domain_error("matrix_exponent: E[exp(w xi)] infinite for pair " +
                                        pair_label(j, i));
            psi(i, j) = rate * xi.mgf(w);
        }
    }
    return psi;
}

Vector xi_switch_mean_rates(const GeneratorMatrix& q, const SwitchJumpTable& table) {
    const int n = q.size();
    Vector out(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j && q.rate(j, k) > 0.0) out[j] += q.rate(j, k) * table.at(j, k).xi.mean();
    return out;
}

Vector eta_switch_mean_rates(const GeneratorMatrix& q, const SwitchJumpTable& table) {
    const int n = q.size();
    Vector out(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j && q.rate(j, k) > 0.0) out[j] += q.rate(j, k) * table.at(j, k).eta.mean();
    return out;
}

std::pair<double, double> RegimePiece::xi_eta_jump(double y) const {
    switch (map) {
        case MarkMap::EtaAdditive:
            return {0.0, y};
        case MarkMap::XiLogSquare:
            return {-std::log1p(map_coeff * y * y), 0.0};
    }
    return {0.0, 0.0};
}

double MapPath::xi_at(double t) const {
    double xi = 0.0, prev = 0.0;
    int state = regimes.initial_state;
    for (const auto& sw : regimes.switches) {
        if (sw.time >= t) break;
        xi += xi_drift[state] * (sw.time - prev);
        prev = sw.time;
        state = sw.to;
    }
    xi += xi_drift[state] * (t - prev);
    for (const auto& ev : events) {
        if (ev.time > t) break;
        xi += ev.dxi;
    }
    return xi;
}

double MapPath::eta_at(double t) const {
    double eta = 0.0, prev = 0.0;
    int state = regimes.initial_state;
    for (const auto& sw : regimes.switches) {
        if (sw.time >= t) break;
        eta += eta_drift[state] * (sw.time - prev);
        prev = sw.time;
        state = sw.to;
    }
    eta += eta_drift[state] * (t - prev);
    for (const auto& ev : events) {
        if (ev.time > t) break;
        eta += ev.deta;
    }
    return eta;
}

MapPath sample_map_path(const GeneratorMatrix& q, const std::vector<RegimePiece>& pieces,
                        const SwitchJumpTable& table, int initial_state, double horizon,
                        RandomStream& rng) {
    const int n = q.size();
    if (static_cast<int>(pieces.size()) != n)
        throw std::invalid_argument("sample_map_path: one RegimePiece per state required");
    if (table.n_states() != n)
        throw std::invalid_argument("sample_map_path: table size does not match generator");

    MapPath path;
    path.regimes = sample_regime_path(q, initial_state, horizon, rng);
    path.xi_drift.resize(n);
    path.eta_drift.resize(n);
    for (int j = 0; j < n; ++j) {
        path.xi_drift[j] = pieces[j].xi_drift;
        path.eta_drift[j] = pieces[j].eta_drift;
    }

    double expected = horizon;
    for (int j = 0; j < n; ++j) expected = std::max(expected, pieces[j].jump_intensity * horizon);
    path.events.reserve(path.regimes.switches.size() + static_cast<std::size_t>(expected) + 8);

    double seg_start = 0.0;
    int state = path.regimes.initial_state;
    std::size_t next_switch = 0;
    while (true) {
        const bool has_switch = next_switch < path.regimes.switches.size();
        const double seg_end = has_switch ? path.regimes.switches[next_switch].time : horizon;

        const RegimePiece& piece = pieces[state];
        if (piece.jump_intensity > 0.0) {
            double t = seg_start;
            for (;;) {
                t += rng.exponential(piece.jump_intensity);
                if (t > seg_end) break;
                const double y = piece.mark.sample(rng);
                const auto [dxi, deta] = piece.xi_eta_jump(y);
                path.events.push_back({t, MapEventKind::Driver, state, state, y, dxi, deta});
            }
        }

        if (!has_switch) break;
        const RegimeSwitch& sw = path.regimes.switches[next_switch];
        const SwitchJumpLaw& law = table.at(sw.from, sw.to);
        const double dxi = law.xi.sample(rng);
        const double deta = law.eta.sample(rng);
        path.events.push_back({sw.time, MapEventKind::Switch, sw.from, sw.to, 0.0, dxi, deta});
        seg_start = sw.time;
        state = sw.to;
        ++next_switch;
    }
    return path;
}

}  // namespace msvol
