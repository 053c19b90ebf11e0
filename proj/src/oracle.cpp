#include "qwec/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>

namespace qwec::oracle {

namespace {

using M2 = Eigen::Matrix2cd;

M2 letter_matrix(char l) {
    M2 m = M2::Zero();
    switch (l) {
        case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
        case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
        case 'Y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
        case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
        default: throw std::invalid_argument("bad letter");
    }
    return m;
}

Dense kron(const Dense& a, const Dense& b) {
    Dense out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Clockwise step on the 4 position states, indexed by 2x + y.
Dense rotation() {
    Dense r = Dense::Zero(4, 4);
    r(0b10, 0b00) = 1;  // 00 -> 10
    r(0b11, 0b10) = 1;  // 10 -> 11
    r(0b01, 0b11) = 1;  // 11 -> 01
    r(0b00, 0b01) = 1;  // 01 -> 00
    return r;
}

std::size_t data_to_global(std::size_t j) {
    const std::size_t d0 = j & 7u, d2 = (j >> 3) & 7u, d4 = (j >> 6) & 7u;
    return (d0 << (3 * slot(Particle::P0))) | (d2 << (3 * slot(Particle::P2))) | (d4 << (3 * slot(Particle::P4)));
}

}  // namespace

bool DenseOperator::satisfies_tag(double tol) const {
    const Eigen::Index n = matrix.rows();
    if (kind == Kind::unitary) return max_abs(matrix.adjoint() * matrix - Dense::Identity(n, n)) <= tol;
    return max_abs(matrix - matrix.adjoint()) <= tol;
}

QubitOrdering data_ordering() {
    QubitOrdering q;
    for (Particle p : kDataParticles)
        for (Role r : {Role::y, Role::x, Role::coin}) q.push_back({p, r});
    return q;
}

QubitOrdering particle_ordering(Particle p) { return {{p, Role::y}, {p, Role::x}, {p, Role::coin}}; }

DenseOperator dense_of(const PauliWord& w, const QubitOrdering& ordering) {
    std::uint32_t housed = 0;
    for (const auto& q : ordering) housed |= 1u << q.bit();
    if (((w.x_mask() | w.z_mask()) & ~housed) != 0) throw std::invalid_argument("Pauli word acts on an unhoused qubit");
    Dense m = Dense::Identity(1, 1);
    for (auto it = ordering.rbegin(); it != ordering.rend(); ++it) m = kron(m, letter_matrix(w.letter(*it)));
    m *= std::pow(cplx(0, 1), w.phase());
    return {m, w.is_hermitian() ? DenseOperator::Kind::hermitian : DenseOperator::Kind::unitary};
}

Dense coin_dense(const CoinSpec& spec, Particle p) {
    Dense m = Dense::Zero(8, 8);
    for (int v = 0; v < 4; ++v) {
        const auto& u = spec.at(p, static_cast<Vertex>(v));
        const M2 c = u ? *u : M2::Identity();
        Dense proj = Dense::Zero(4, 4);
        proj(v, v) = 1;
        m += kron(c, proj);
    }
    return m;
}

Dense shift_dense() {
    Dense p0 = Dense::Zero(2, 2), p1 = Dense::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    return kron(p0, Dense::Identity(4, 4)) + kron(p1, rotation());
}

Dense nested_neighbor_dense() {
    Dense m = Dense::Identity(64, 64);
    for (int lo = 0; lo < 8; ++lo) m(lo * 9, lo * 9) = -1;  // equal digits: index hi*8 + lo with hi == lo
    return m;
}

Dense external_neighbor_dense() {
    Dense m = Dense::Identity(64, 64);
    for (int c = 0; c < 2; ++c) {
        const int p4_00 = 4 * c + 0b00, pex_10 = 4 * c + 0b10;
        const int p4_01 = 4 * c + 0b01, pex_11 = 4 * c + 0b11;
        m(pex_10 * 8 + p4_00, pex_10 * 8 + p4_00) = -1;
        m(pex_11 * 8 + p4_01, pex_11 * 8 + p4_01) = -1;
    }
    return m;
}

void apply_dense(StateVector& state, std::span<const Particle> particles, const Dense& op) {
    const std::size_t k = particles.size();
    const std::size_t sub = std::size_t{1} << (3 * k);
    if (static_cast<std::size_t>(op.rows()) != sub) throw std::invalid_argument("operator dimension mismatch");
    std::size_t mask = 0;
    for (Particle p : particles) {
        if (!state.layout().has(p)) throw std::invalid_argument("particle not in layout");
        mask |= std::size_t{7} << (3 * slot(p));
    }
    auto offset = [&](std::size_t j) {
        std::size_t g = 0;
        for (std::size_t t = 0; t < k; ++t) g |= ((j >> (3 * t)) & 7u) << (3 * slot(particles[t]));
        return g;
    };
    Vec v(static_cast<Eigen::Index>(sub));
    for (std::size_t base = 0; base < state.dimension(); ++base) {
        if (base & mask) continue;
        for (std::size_t j = 0; j < sub; ++j) v[static_cast<Eigen::Index>(j)] = state[base + offset(j)];
        const Vec w = op * v;
        for (std::size_t j = 0; j < sub; ++j) state[base + offset(j)] = w[static_cast<Eigen::Index>(j)];
    }
}

void apply_step_dense(StateVector& state, const WalkStep& step) {
    const int n = state.layout().particle_count();
    if (const auto* c = std::get_if<CoinStep>(&step)) {
        for (int k = 0; k < n; ++k) {
            const Particle p = static_cast<Particle>(k);
            const std::array<Particle, 1> one{p};
            apply_dense(state, one, coin_dense(c->spec, p));
        }
    } else if (std::holds_alternative<ShiftStep>(step)) {
        for (int k = 0; k < n; ++k) {
            const std::array<Particle, 1> one{static_cast<Particle>(k)};
            apply_dense(state, one, shift_dense());
        }
    } else if (std::holds_alternative<NeighborStep>(step)) {
        for (int k = 0; k < 4; ++k) {
            const std::array<Particle, 2> pair{static_cast<Particle>(k), static_cast<Particle>(k + 1)};
            apply_dense(state, pair, nested_neighbor_dense());
        }
        if (state.layout().external) {
            const std::array<Particle, 2> pair{Particle::P4, Particle::PEX};
            apply_dense(state, pair, external_neighbor_dense());
        }
    } else if (const auto* l = std::get_if<LocalCoinStep>(&step)) {
        const std::array<Particle, 1> one{l->particle};
        apply_dense(state, one, kron(l->unitary, Dense::Identity(4, 4)));
    } else if (std::holds_alternative<InjectionPointStep>(step)) {
        return;
    } else {
        throw std::invalid_argument("dense reference has no measurement steps");
    }
}

namespace {

using Sparse = Eigen::SparseMatrix<cplx>;

Sparse sparse_projector(const PauliWord& w, int sign) {
    const Dense m = 0.5 * (Dense::Identity(512, 512) + double(sign) * dense_of(w, data_ordering()).matrix);
    return m.sparseView(1.0, 1e-14);
}

Sparse stabilizer_projector(const std::array<int, 6>& signs) {
    const auto& cb = code_basis();
    Sparse p = sparse_projector(cb.stabilizers[0], signs[0]);
    for (int i = 1; i < 6; ++i) p = (p * sparse_projector(cb.stabilizers[i], signs[i])).pruned(1e-14);
    return p;
}

}  // namespace

int eigenspace_dimension(const std::array<int, 6>& signs) {
    const Sparse p = stabilizer_projector(signs);
    const Sparse sq = p * p;
    if (max_abs(Dense(sq - p)) > 1e-9 || max_abs(Dense(p - Sparse(p.adjoint()))) > 1e-9)
        throw std::logic_error("stabilizer projector product is not an orthogonal projector");
    double tr = 0;
    for (int k = 0; k < p.outerSize(); ++k)
        for (Sparse::InnerIterator it(p, k); it; ++it)
            if (it.row() == it.col()) tr += it.value().real();
    return static_cast<int>(std::lround(tr));
}

CodespaceBasis codespace_basis(const std::array<int, 6>& signs) {
    if (eigenspace_dimension(signs) == 0) throw std::invalid_argument("inconsistent stabilizer signs");
    const auto& cb = code_basis();
    const Sparse stab = stabilizer_projector(signs);
    CodespaceBasis out;
    for (int idx = 0; idx < 8; ++idx) {
        const int sz = (idx & 4) ? -1 : 1, s1 = (idx & 2) ? -1 : 1, s0 = (idx & 1) ? -1 : 1;
        const Sparse p = stab * sparse_projector(cb.logical_z, sz) * sparse_projector(cb.gauges[2], s1) *
                         sparse_projector(cb.gauges[0], s0);
        Vec v;
        for (Eigen::Index j = 0; j < 512; ++j) {
            v = p.col(j);
            if (v.norm() > 1e-6) break;
        }
        if (v.norm() < 1e-6) throw std::logic_error("empty codespace sector");
        // fix the global phase by making the largest entry real positive
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        v *= std::conj(v[arg]) / std::abs(v[arg]);
        out.vectors[static_cast<std::size_t>(idx)] = v.normalized();
    }
    return out;
}

std::array<Vec, 2> CodespaceBasis::logical_pair(int gauge_config) const {
    const Vec zero = vectors[static_cast<std::size_t>(gauge_config & 3)];
    const Vec one = dense_of(code_basis().logical_x, data_ordering()).matrix * zero;
    return {zero, one};
}

StateVector embed_data(const Vec& data, Layout layout, std::array<cplx, 2> pex_coin) {
    if (data.size() != 512) throw std::invalid_argument("data vector must have 512 entries");
    StateVector s(layout);
    for (std::size_t j = 0; j < 512; ++j) {
        const std::size_t g = data_to_global(j);
        if (layout.external) {
            s[g] = pex_coin[0] * data[static_cast<Eigen::Index>(j)];
            s[g | (std::size_t{4} << (3 * slot(Particle::PEX)))] = pex_coin[1] * data[static_cast<Eigen::Index>(j)];
        } else {
            s[g] = data[static_cast<Eigen::Index>(j)];
        }
    }
    return s;
}

Vec data_part(const StateVector& state) {
    Vec v(512);
    for (std::size_t j = 0; j < 512; ++j) v[static_cast<Eigen::Index>(j)] = state[data_to_global(j)];
    return v;
}

Dense extract_unitary(const WalkProgram& program, std::span<const StateVector> inputs,
                      std::span<const StateVector> outputs) {
    if (program.has_measurements()) throw std::invalid_argument("extract_unitary: program measures");
    Dense m(static_cast<Eigen::Index>(outputs.size()), static_cast<Eigen::Index>(inputs.size()));
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        StateVector s = inputs[j];
        run_unitary(program, s);
        for (std::size_t i = 0; i < outputs.size(); ++i)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner(outputs[i], s);
    }
    return m;
}

double max_abs(const Dense& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace qwec::oracle
