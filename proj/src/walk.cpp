#include "qwec/walk.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qwec {

namespace {

constexpr std::size_t pow8(int k) { return std::size_t{1} << (3 * k); }

void require_particle(const StateVector& s, Particle p) {
    if (!s.layout().has(p))
        throw std::invalid_argument("particle " + std::string(particle_name(p)) + " not in layout");
}

// Calls f(base) for every index whose digit of particle p is zero.
template <class F>
void for_each_base(const StateVector& s, Particle p, F f) {
    const std::size_t stride = pow8(slot(p));
    const std::size_t block = stride * 8;
    for (std::size_t hi = 0; hi < s.dimension(); hi += block)
        for (std::size_t lo = 0; lo < stride; ++lo) f(hi + lo, stride);
}

}  // namespace

Vertex next_clockwise(Vertex v) {
    switch (v) {
        case Vertex::v00: return Vertex::v10;
        case Vertex::v10: return Vertex::v11;
        case Vertex::v11: return Vertex::v01;
        case Vertex::v01: return Vertex::v00;
    }
    return v;
}

const char* vertex_label(Vertex v) {
    static constexpr const char* labels[4] = {"00", "01", "10", "11"};
    return labels[code(v)];
}

Vertex parse_vertex(std::string_view label) {
    if (label == "00") return Vertex::v00;
    if (label == "01") return Vertex::v01;
    if (label == "10") return Vertex::v10;
    if (label == "11") return Vertex::v11;
    throw std::invalid_argument("bad vertex label '" + std::string(label) + "'");
}

namespace coins {
Mat2 I() { return Mat2::Identity(); }
Mat2 X() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}
Mat2 Y() {
    Mat2 m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
Mat2 Z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}
Mat2 H() { return (X() + Z()) / std::numbers::sqrt2; }
Mat2 H_prime() { return (X() - Z()) / std::numbers::sqrt2; }
Mat2 phase_rotation(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::polar(1.0, -theta / 2);
    m(1, 1) = std::polar(1.0, theta / 2);
    return m;
}
Mat2 S() { return phase_rotation(std::numbers::pi / 2); }
Mat2 ZS() { return Z() * S(); }
Mat2 T() { return phase_rotation(std::numbers::pi / 4); }
}  // namespace coins

bool is_unitary(const Mat2& u, double tol) {
    return ((u.adjoint() * u) - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Mat8& u, double tol) {
    return ((u.adjoint() * u) - Mat8::Identity()).cwiseAbs().maxCoeff() <= tol;
}

CoinSpec& CoinSpec::set(Particle p, Vertex v, const Mat2& u) {
    if (!is_unitary(u)) throw std::invalid_argument("coin entry is not unitary");
    table_[slot(p)][code(v)] = u;
    return *this;
}

CoinSpec& CoinSpec::set_all(Particle p, const Mat2& u) {
    for (Vertex v : kClockwise) set(p, v, u);
    return *this;
}

CoinSpec& CoinSpec::set(Particle p, std::initializer_list<Vertex> vs, const Mat2& u) {
    for (Vertex v : vs) set(p, v, u);
    return *this;
}

bool CoinSpec::touches(Particle p) const {
    for (const auto& e : table_[slot(p)])
        if (e) return true;
    return false;
}

bool CoinSpec::empty() const {
    for (int k = 0; k < kParticleSlots; ++k)
        if (touches(static_cast<Particle>(k))) return false;
    return true;
}

StateVector::StateVector(Layout layout) : layout_(layout), amp_(layout.dimension(), cplx{}) {}

double StateVector::norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
}

void StateVector::normalize() {
    const double n = norm();
    if (n < 1e-300) throw std::domain_error("cannot normalize a zero vector");
    for (auto& a : amp_) a /= n;
}

StateVector init_state(Layout layout, std::span<const Placement> placements) {
    if (placements.empty()) throw std::invalid_argument("init_state: no placements");
    StateVector s(layout);
    std::array<bool, kParticleSlots> seen{};
    std::size_t index = 0;
    for (const auto& pl : placements) {
        if (!layout.has(pl.particle)) throw std::invalid_argument("init_state: particle not in layout");
        if (seen[slot(pl.particle)]) throw std::invalid_argument("init_state: duplicate particle");
        if (pl.coin != 0 && pl.coin != 1) throw std::invalid_argument("init_state: coin must be 0 or 1");
        seen[slot(pl.particle)] = true;
        index |= static_cast<std::size_t>(4 * pl.coin + code(pl.vertex)) << (3 * slot(pl.particle));
    }
    for (int k = 0; k < layout.particle_count(); ++k)
        if (!seen[k]) throw std::invalid_argument("init_state: missing particle placement");
    s[index] = 1.0;
    return s;
}

StateVector ground_state(Layout layout) {
    StateVector s(layout);
    s[0] = 1.0;
    return s;
}

void apply_coin(StateVector& state, const CoinSpec& spec) {
    auto amp = state.amplitudes();
    for (int k = 0; k < state.layout().particle_count(); ++k) {
        const Particle p = static_cast<Particle>(k);
        if (!spec.touches(p)) continue;
        for (Vertex v : kClockwise) {
            const auto& u = spec.at(p, v);
            if (!u) continue;
            const Mat2& m = *u;
            const std::size_t off = static_cast<std::size_t>(code(v));
            for_each_base(state, p, [&](std::size_t base, std::size_t stride) {
                cplx& a0 = amp[base + off * stride];
                cplx& a1 = amp[base + (off + 4) * stride];
                const cplx b0 = m(0, 0) * a0 + m(0, 1) * a1;
                const cplx b1 = m(1, 0) * a0 + m(1, 1) * a1;
                a0 = b0;
                a1 = b1;
            });
        }
    }
}

void apply_shift(StateVector& state) {
    static const std::array<std::size_t, 8> moved = [] {
        std::array<std::size_t, 8> t{};
        for (int b = 0; b < 8; ++b)
            t[b] = b < 4 ? b : 4 + code(next_clockwise(static_cast<Vertex>(b - 4)));
        return t;
    }();
    const int n = state.layout().particle_count();
    auto amp = state.amplitudes();
    std::vector<cplx> out(amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
        std::size_t j = 0;
        for (int k = 0; k < n; ++k) j |= moved[(i >> (3 * k)) & 7u] << (3 * k);
        out[j] = amp[i];
    }
    std::copy(out.begin(), out.end(), amp.begin());
}

void apply_neighbor(StateVector& state) {
    const int n = state.layout().particle_count();
    const bool ext = state.layout().external;
    auto amp = state.amplitudes();
    for (std::size_t i = 0; i < amp.size(); ++i) {
        int fires = 0;
        // nested pairs interact when coin and vertex agree, i.e. equal digits
        for (int k = 0; k + 1 < 5 && k + 1 < n; ++k)
            fires += ((i >> (3 * k)) & 7u) == ((i >> (3 * (k + 1))) & 7u);
        if (ext) {
            const int ex = StateVector::digit(i, Particle::PEX);
            const int p4 = StateVector::digit(i, Particle::P4);
            if ((ex >> 2) == (p4 >> 2)) {
                const int ve = ex & 3, v4 = p4 & 3;
                fires += (ve == code(Vertex::v10) && v4 == code(Vertex::v00)) ||
                         (ve == code(Vertex::v11) && v4 == code(Vertex::v01));
            }
        }
        if (fires & 1) amp[i] = -amp[i];
    }
}

void apply_particle_unitary(StateVector& state, Particle p, const Mat8& u) {
    require_particle(state, p);
    if (!is_unitary(u)) throw std::invalid_argument("particle unitary is not unitary");
    auto amp = state.amplitudes();
    Eigen::Matrix<cplx, 8, 1> v;
    for_each_base(state, p, [&](std::size_t base, std::size_t stride) {
        for (int d = 0; d < 8; ++d) v[d] = amp[base + d * stride];
        v = u * v;
        for (int d = 0; d < 8; ++d) amp[base + d * stride] = v[d];
    });
}

void apply_local_coin(StateVector& state, Particle p, const Mat2& u) {
    require_particle(state, p);
    apply_coin(state, CoinSpec{}.set_all(p, u));
}

void apply_pauli(StateVector& state, const PauliWord& w) {
    const std::size_t dim = state.dimension();
    if (((w.x_mask() | w.z_mask()) >> (3 * state.layout().particle_count())) != 0)
        throw std::invalid_argument("Pauli word acts outside the layout");
    const int n_y = std::popcount(w.x_mask() & w.z_mask());
    const cplx phase = std::pow(cplx(0, 1), (w.phase() + n_y) & 3);
    auto amp = state.amplitudes();
    std::vector<cplx> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const bool neg = std::popcount(i & w.z_mask()) & 1;
        out[i ^ w.x_mask()] = neg ? -phase * amp[i] : phase * amp[i];
    }
    std::copy(out.begin(), out.end(), amp.begin());
}

namespace {

// Unnormalized weight of each coin value, summed separately so a rare outcome keeps its relative precision.
std::array<double, 2> coin_weights(const StateVector& state, Particle p) {
    require_particle(state, p);
    std::array<double, 2> w{};
    auto amp = state.amplitudes();
    for (std::size_t i = 0; i < amp.size(); ++i) w[(StateVector::digit(i, p) >> 2) & 1] += std::norm(amp[i]);
    return w;
}

}  // namespace

double coin_one_probability(const StateVector& state, Particle p) {
    const auto w = coin_weights(state, p);
    return w[1] / (w[0] + w[1]);
}

std::array<double, 4> vertex_marginal(const StateVector& state, Particle p) {
    require_particle(state, p);
    std::array<double, 4> m{};
    auto amp = state.amplitudes();
    for (std::size_t i = 0; i < amp.size(); ++i) m[StateVector::digit(i, p) & 3] += std::norm(amp[i]);
    return m;
}

CoinMeasurement collapse_coin(StateVector& state, Particle p, int bit) {
    const auto w = coin_weights(state, p);
    const double prob = w[static_cast<std::size_t>(bit)] / (w[0] + w[1]);
    if (prob < 1e-12) throw std::domain_error("forced coin outcome has probability below 1e-12");
    auto amp = state.amplitudes();
    const double scale = 1.0 / std::sqrt(w[static_cast<std::size_t>(bit)]);
    for (std::size_t i = 0; i < amp.size(); ++i) {
        if (((StateVector::digit(i, p) >> 2) & 1) == bit) amp[i] *= scale;
        else amp[i] = 0;
    }
    return {bit, prob};
}

CoinMeasurement measure_coin(StateVector& state, Particle p, std::mt19937_64& rng) {
    const double p1 = coin_one_probability(state, p);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int bit = u(rng) < p1 ? 1 : 0;
    return collapse_coin(state, p, bit);
}

std::array<std::optional<CoinBranch>, 2> measure_coin_both(const StateVector& state, Particle p) {
    const auto w = coin_weights(state, p);
    std::array<std::optional<CoinBranch>, 2> out;
    for (int bit = 0; bit < 2; ++bit) {
        const double prob = w[static_cast<std::size_t>(bit)] / (w[0] + w[1]);
        if (prob < 1e-12) continue;
        StateVector s = state;
        collapse_coin(s, p, bit);
        out[bit] = CoinBranch{std::move(s), prob};
    }
    return out;
}

double expectation(const StateVector& state, const PauliWord& w) {
    if (!w.is_hermitian()) throw std::invalid_argument("expectation of a non-Hermitian Pauli word");
    StateVector t = state;
    apply_pauli(t, w);
    return inner(state, t).real();
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
    cplx s{};
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::norm(inner(a, b)); }

double max_deviation(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
    double m = 0;
    for (std::size_t i = 0; i < a.dimension(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::pair<StateVector, double> project_pauli(const StateVector& state, const PauliWord& w, int sign) {
    if (!w.is_hermitian()) throw std::invalid_argument("projection onto a non-Hermitian Pauli word");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    StateVector t = state;
    apply_pauli(t, w);
    StateVector out = state;
    for (std::size_t i = 0; i < out.dimension(); ++i) out[i] = 0.5 * (state[i] + double(sign) * t[i]);
    const double n = out.norm();
    const double prob = n * n;
    if (prob < 1e-12) throw std::domain_error("projection has probability below 1e-12");
    out.normalize();
    return {std::move(out), prob};
}

StateVector drop_external(const StateVector& state, int digit) {
    if (!state.layout().external) throw std::invalid_argument("no external particle to drop");
    StateVector out(Layout::nested());
    const std::size_t off = static_cast<std::size_t>(digit) * out.dimension();
    double kept = 0;
    for (std::size_t i = 0; i < out.dimension(); ++i) {
        out[i] = state[off + i];
        kept += std::norm(out[i]);
    }
    if (std::abs(kept - 1.0) > 1e-10)
        throw std::domain_error("external particle is not in the requested basis state");
    out.normalize();
    return out;
}

StateVector add_external(const StateVector& state, int digit) {
    if (state.layout().external) throw std::invalid_argument("layout already has the external particle");
    StateVector out(Layout::with_external());
    const std::size_t off = static_cast<std::size_t>(digit) * state.dimension();
    for (std::size_t i = 0; i < state.dimension(); ++i) out[off + i] = state[i];
    return out;
}

}  // namespace qwec
