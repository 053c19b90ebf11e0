#include "qwec/codec.hpp"

#include <stdexcept>

namespace qwec {

namespace {

constexpr std::array<const char*, 6> kTags{"s0", "s1", "s2", "s3", "s4", "s5"};

void require_parked_external(const StateVector& s) {
    if (!s.layout().external) throw std::invalid_argument("the external particle is required");
    double parked = 0;
    for (std::size_t i = 0; i < s.dimension(); ++i)
        if (StateVector::digit(i, Particle::PEX) == 0) parked += std::norm(s[i]);
    if (parked < 1.0 - 1e-10) throw ProtocolError("PEX is not parked at coin 0, vertex 00");
}

Signs signs_of(const Branch& b) {
    Signs e{};
    for (int i = 0; i < 6; ++i) e[i] = b.bit(kTags[i]) ? -1 : 1;
    return e;
}

Mat2 coin_loader(cplx alpha, cplx beta) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10)
        throw std::invalid_argument("encode: |alpha|^2 + |beta|^2 must be 1");
    Mat2 u;
    u << alpha, -std::conj(beta), beta, std::conj(alpha);
    return u;
}

void encode_front(Session& s, cplx alpha, cplx beta) {
    require_parked_external(s.state);
    apply_local_coin(s.state, Particle::PEX, coin_loader(alpha, beta));
    run_unitary(build_cnot_coin_to_logical(s.data_frame), s.state);
    apply_local_coin(s.state, Particle::PEX, coins::H());
}

void encode_back(Session& s, int outcome) {
    if (outcome == 1) {
        run_unitary(build_logical_clifford(LogicalClifford::Z), s.state);
        apply_local_coin(s.state, Particle::PEX, coins::X());
    }
}

void record_cycle(Session& s, const Branch& b) {
    s.history.append(signs_of(b));
    s.data_frame = flipped(s.data_frame);
}

int eigen(int bit) { return bit ? -1 : 1; }

}  // namespace

void SyndromeHistory::append(const Signs& eigenvalues) {
    const Signs& prev = latest();
    unsigned m = 0;
    for (int i = 0; i < 6; ++i)
        if (eigenvalues[i] != prev[i]) m |= 1u << i;
    cycles.push_back({eigenvalues, Syndrome(m), next_parity(), eigenvalues});
}

Session prepare_logical_zero(Layout layout, const ForcedSigns& signs) {
    const auto& cb = code_basis();
    StateVector st = ground_state(layout);
    for (int i = 0; i < 6; ++i) st = project_pauli(st, cb.stabilizers[i], signs.stabilizers[i]).first;
    // the all-zero start is a +1 eigenstate of Zbar; the -1 state is reached by Xbar
    st = project_pauli(st, cb.logical_z, 1).first;
    if (signs.logical_z == -1) apply_pauli(st, cb.logical_x);
    Session s{std::move(st), {}, {}, DataFrame::unshifted, {}};
    s.history.reference = signs.stabilizers;
    return s;
}

Session prepare_logical_zero(Layout layout, std::mt19937_64& rng) {
    const auto& cb = code_basis();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StateVector st = ground_state(layout);
    Signs ref{};
    auto measure = [&](const PauliWord& w) {
        const double p_plus = 0.5 * (1.0 + expectation(st, w));
        const int sign = u(rng) < p_plus ? 1 : -1;
        st = project_pauli(st, w, sign).first;
        return sign;
    };
    for (int i = 0; i < 6; ++i) ref[i] = measure(cb.stabilizers[i]);
    measure(cb.logical_z);
    Session s{std::move(st), {}, {}, DataFrame::unshifted, {}};
    s.history.reference = ref;
    return s;
}

void encode(Session& s, cplx alpha, cplx beta, std::mt19937_64& rng) {
    encode_front(s, alpha, beta);
    const auto m = measure_coin(s.state, Particle::PEX, rng);
    encode_back(s, m.bit);
}

void encode_forced(Session& s, cplx alpha, cplx beta, int pex_outcome) {
    encode_front(s, alpha, beta);
    collapse_coin(s.state, Particle::PEX, pex_outcome);
    encode_back(s, pex_outcome);
}

std::vector<std::pair<Session, double>> encode_branches(const Session& s, cplx alpha, cplx beta) {
    Session front = s;
    encode_front(front, alpha, beta);
    std::vector<std::pair<Session, double>> out;
    auto both = measure_coin_both(front.state, Particle::PEX);
    for (int bit = 0; bit < 2; ++bit) {
        if (!both[bit]) continue;
        Session b = front;
        b.state = std::move(both[bit]->state);
        encode_back(b, bit);
        out.emplace_back(std::move(b), both[bit]->probability);
    }
    return out;
}

void run_cycle(Session& s, std::mt19937_64& rng, const InjectionHook& hook) {
    const Branch b = run_sampled(build_full_cycle(s.history.next_parity()), std::move(s.state), rng, hook);
    s.state = b.state;
    record_cycle(s, b);
}

std::vector<std::pair<Session, double>> run_cycle_branches(const Session& s, const InjectionHook& hook) {
    std::vector<std::pair<Session, double>> out;
    for (Branch& b : run_branches(build_full_cycle(s.history.next_parity()), s.state, hook)) {
        Session next{std::move(b.state), s.history, s.frame, s.data_frame, s.injected};
        record_cycle(next, b);
        out.emplace_back(std::move(next), b.probability);
    }
    return out;
}

void update_frame(const SyndromeHistory& history, PauliFrame& frame) {
    if (history.cycles.empty()) throw std::logic_error("update_frame: no completed cycle");
    const Syndrome m = history.cycles.back().m;
    const Decoded d = decode_lookup(m);
    frame.log.push_back(m);
    if (!d.correctable) {
        frame.uncorrectable = true;
        return;
    }
    frame.correction = frame.correction * d.correction;
}

PauliWord in_data_frame(const PauliWord& w, DataFrame data_frame) {
    return data_frame == DataFrame::shifted ? conjugate_shift_two(w) : w;
}

void apply_frame(Session& s) {
    apply_pauli(s.state, in_data_frame(s.frame.correction, s.data_frame));
    if (!s.history.cycles.empty()) {
        auto& after = s.history.cycles.back().after_correction;
        for (int i = 0; i < 6; ++i)
            if (!commutes(s.frame.correction, code_basis().stabilizers[i])) after[i] = -after[i];
    }
    s.frame.correction = PauliWord::identity();
}

void restore_unshifted(Session& s) {
    if (s.data_frame == DataFrame::unshifted) return;
    apply_shift(s.state);
    apply_shift(s.state);
    s.data_frame = DataFrame::unshifted;
}

LogicalReadout logical_readout(const StateVector& state, const PauliFrame& frame, DataFrame data_frame) {
    const auto& cb = code_basis();
    const std::array<PauliWord, 3> ops{cb.logical_x, cb.logical_y(), cb.logical_z};
    LogicalReadout r;
    for (int k = 0; k < 3; ++k) {
        r.raw[k] = expectation(state, in_data_frame(ops[k], data_frame));
        r.bloch[k] = commutes(frame.correction, ops[k]) ? r.raw[k] : -r.raw[k];
    }
    return r;
}

LogicalReadout logical_readout(const Session& s) { return logical_readout(s.state, s.frame, s.data_frame); }

GaugeMeasurement measure_g(Session& s, std::mt19937_64& rng) {
    if (s.history.cycles.empty()) throw std::logic_error("measure_g: no completed cycle supplies s4");
    GaugeMeasurement g{};
    g.s4 = s.history.latest()[4];
    Branch zz = run_sampled(build_gauge_zz_measurement(), std::move(s.state), rng);
    g.zz = eigen(zz.bit("gzz.P1")) * eigen(zz.bit("gzz.P3"));
    Branch xx = run_sampled(build_gauge_xx_measurement(s.data_frame), std::move(zz.state), rng);
    g.xx = eigen(xx.bit("gxx.P1")) * eigen(xx.bit("gxx.P3"));
    s.state = std::move(xx.state);
    g.sign = g.s4 * g.zz * g.xx;
    // the frame is a pending correction; read g as it will be after applying it
    if (!commutes(s.frame.correction, code_basis().gauge_product_g())) g.sign = -g.sign;
    return g;
}

void logical_T(Session& s, std::mt19937_64& rng) {
    require_parked_external(s.state);
    auto controlled_not = [&] {
        run_unitary(build_cphase(s.data_frame), s.state);
        if (measure_g(s, rng).sign == -1) apply_local_coin(s.state, Particle::PEX, coins::X());
    };
    controlled_not();
    apply_local_coin(s.state, Particle::PEX, coins::T());
    controlled_not();
}

void apply_logical_clifford(Session& s, LogicalClifford gate) {
    run_unitary(build_logical_clifford(gate), s.state);
    if (gate == LogicalClifford::H) s.frame.correction = conjugate_transversal(s.frame.correction, TransversalGate::H);
    if (gate == LogicalClifford::S) s.frame.correction = conjugate_transversal(s.frame.correction, TransversalGate::ZS);
}

}  // namespace qwec
