#include "qwec/error_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qwec {

namespace {

using Mat4 = Eigen::Matrix<cplx, 4, 4>;

Mat4 rotation4() {
    Mat4 r = Mat4::Zero();
    for (Vertex v : kClockwise) r(code(next_clockwise(v)), code(v)) = 1.0;
    return r;
}

Mat4 shift_block(const ShiftError& e, int j) {
    const Mat4 r = rotation4();
    return e.alpha[j] * Mat4::Identity() + e.beta[j] * r + e.gamma[j] * r.transpose();
}

Mat2 haar_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat2 g;
    for (int i = 0; i < 4; ++i) g(i / 2, i % 2) = cplx(n(rng), n(rng));
    Eigen::HouseholderQR<Mat2> qr(g);
    Mat2 q = qr.householderQ();
    const Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < 2; ++k) {
        const cplx d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

// Three-term unitaries have R-eigenvalues (l0, l1, l2, l3) with
// l0 + l2 = l1 + l3: either {l1, l3} = {l0, l2} or alpha = 0.
void sample_shift_block(std::mt19937_64& rng, ShiftError& e, int j) {
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    std::uniform_int_distribution<int> pick(0, 2);
    const cplx l0 = std::polar(1.0, angle(rng));
    const cplx l2 = std::polar(1.0, angle(rng));
    const cplx i(0, 1);
    switch (pick(rng)) {
        case 0: {  // l1 = l0, l3 = l2
            const cplx sum = (l0 - l2) / 2.0, diff = (l0 - l2) / (2.0 * i);
            e.alpha[j] = (l0 + l2) / 2.0;
            e.beta[j] = (sum + diff) / 2.0;
            e.gamma[j] = (sum - diff) / 2.0;
            break;
        }
        case 1: {  // l1 = l2, l3 = l0
            const cplx sum = (l0 - l2) / 2.0, diff = (l2 - l0) / (2.0 * i);
            e.alpha[j] = (l0 + l2) / 2.0;
            e.beta[j] = (sum + diff) / 2.0;
            e.gamma[j] = (sum - diff) / 2.0;
            break;
        }
        default: {  // alpha = 0, l2 = -l0, l3 = -l1 with l1 free
            const cplx l1 = l2;
            const cplx sum = l0, diff = l1 / i;
            e.alpha[j] = 0.0;
            e.beta[j] = (sum + diff) / 2.0;
            e.gamma[j] = (sum - diff) / 2.0;
            break;
        }
    }
}

}  // namespace

std::string_view family_name(ErrorFamily f) {
    switch (f) {
        case ErrorFamily::coin: return "coin";
        case ErrorFamily::shift: return "shift";
        case ErrorFamily::pauli: return "pauli";
    }
    return "?";
}

ErrorFamily parse_family(std::string_view name) {
    if (name == "coin") return ErrorFamily::coin;
    if (name == "shift") return ErrorFamily::shift;
    if (name == "pauli") return ErrorFamily::pauli;
    throw std::invalid_argument("unknown error family '" + std::string(name) + "'");
}

Mat8 rotation_dense() {
    Mat8 r = Mat8::Zero();
    const Mat4 r4 = rotation4();
    r.topLeftCorner<4, 4>() = r4;
    r.bottomRightCorner<4, 4>() = r4;
    return r;
}

Mat2 pauli_letter(char l) {
    switch (l) {
        case 'I': return coins::I();
        case 'X': return coins::X();
        case 'Y': return coins::Y();
        case 'Z': return coins::Z();
        default: throw std::invalid_argument("bad Pauli letter");
    }
}

Mat8 dense_on_particle(const PauliWord& w, Particle p) {
    if (w.restricted(p).x_mask() != w.x_mask() || w.restricted(p).z_mask() != w.z_mask())
        throw std::invalid_argument("Pauli word is not confined to one particle");
    const std::string l = w.letters(p);
    const Mat2 c = pauli_letter(l[0]), x = pauli_letter(l[1]), y = pauli_letter(l[2]);
    Mat8 m;
    for (int r = 0; r < 8; ++r)
        for (int k = 0; k < 8; ++k) m(r, k) = c(r >> 2, k >> 2) * x((r >> 1) & 1, (k >> 1) & 1) * y(r & 1, k & 1);
    return m * std::pow(cplx(0, 1), w.phase());
}

void validate(const ErrorSpec& spec) {
    if (!is_data(spec.target) && spec.target != Particle::P1 && spec.target != Particle::P3 &&
        spec.target != Particle::PEX)
        throw InvalidError("bad target");
    if (const auto* c = std::get_if<CoinError>(&spec.model)) {
        for (Vertex v : kClockwise)
            if (!is_unitary(c->blocks[code(v)]))
                throw InvalidError(std::string("coin error block at vertex ") + vertex_label(v) + " is not unitary");
    } else if (const auto* s = std::get_if<ShiftError>(&spec.model)) {
        for (int j = 0; j < 2; ++j) {
            const Mat4 b = shift_block(*s, j);
            if (((b.adjoint() * b) - Mat4::Identity()).cwiseAbs().maxCoeff() > kUnitaryTol)
                throw InvalidError("shift error block for coin " + std::to_string(j) + " is not unitary");
        }
    } else {
        const auto& f = std::get<PauliFlip>(spec.model);
        const PauliWord r = f.word.restricted(spec.target);
        if (r.x_mask() != f.word.x_mask() || r.z_mask() != f.word.z_mask())
            throw InvalidError("Pauli flip acts outside its target particle");
    }
}

Mat8 realize(const ErrorSpec& spec) {
    validate(spec);
    Mat8 u = Mat8::Zero();
    if (const auto* c = std::get_if<CoinError>(&spec.model)) {
        for (int v = 0; v < 4; ++v)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) u(4 * a + v, 4 * b + v) = c->blocks[v](a, b);
    } else if (const auto* s = std::get_if<ShiftError>(&spec.model)) {
        u.topLeftCorner<4, 4>() = shift_block(*s, 0);
        u.bottomRightCorner<4, 4>() = shift_block(*s, 1);
    } else {
        const auto& f = std::get<PauliFlip>(spec.model);
        u = dense_on_particle(f.word, spec.target);
    }
    return u;
}

ErrorSpec sample_random_error(std::mt19937_64& rng, ErrorFamily family, Particle target) {
    ErrorSpec spec;
    spec.target = target;
    switch (family) {
        case ErrorFamily::coin: {
            CoinError c;
            for (auto& b : c.blocks) b = haar_unitary(rng);
            spec.model = c;
            break;
        }
        case ErrorFamily::shift: {
            ShiftError s;
            sample_shift_block(rng, s, 0);
            sample_shift_block(rng, s, 1);
            spec.model = s;
            break;
        }
        case ErrorFamily::pauli: {
            std::uniform_int_distribution<int> pick(0, 8);
            const int k = pick(rng);
            static constexpr std::array<Role, 3> roles{Role::coin, Role::x, Role::y};
            spec.model = PauliFlip{PauliWord::single({target, roles[k / 3]}, "XYZ"[k % 3])};
            break;
        }
    }
    return spec;
}

void inject(StateVector& state, const ErrorSpec& spec) {
    apply_particle_unitary(state, spec.target, realize(spec));
}

}  // namespace qwec
