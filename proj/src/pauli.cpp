#include "qwec/pauli.hpp"

#include <bit>
#include <map>
#include <stdexcept>

namespace qwec {

namespace {

constexpr std::uint32_t particle_mask(Particle p) { return 7u << (3 * slot(p)); }
constexpr std::uint32_t kDataMask =
    particle_mask(Particle::P0) | particle_mask(Particle::P2) | particle_mask(Particle::P4);

constexpr std::array<std::string_view, kParticleSlots> kNames{"P0", "P1", "P2", "P3", "P4", "PEX"};

// letter code = x | z << 1, so X = 1, Z = 2, Y = 3
int letter_code(const PauliWord& w, int bit) {
    return static_cast<int>(((w.x_mask() >> bit) & 1u) | (((w.z_mask() >> bit) & 1u) << 1));
}

// exponent e with a * b = i^e * (a xor b) for single letters
int product_phase(int a, int b) {
    static constexpr int table[4][4] = {
        {0, 0, 0, 0},
        {0, 0, 3, 1},  // X*Z = -iY, X*Y = iZ
        {0, 1, 0, 3},  // Z*X = iY, Z*Y = -iX
        {0, 3, 1, 0},  // Y*X = -iZ, Y*Z = iX
    };
    return table[a][b];
}

char code_letter(int c) { return "IXZY"[c]; }

int letter_to_code(char c) {
    switch (c) {
        case 'I': return 0;
        case 'X': return 1;
        case 'Z': return 2;
        case 'Y': return 3;
        default: throw std::invalid_argument(std::string("bad Pauli letter '") + c + "'");
    }
}

std::string phase_text(int k) {
    static constexpr std::array<const char*, 4> t{"+1", "+i", "-1", "-i"};
    return t[k & 3];
}

// Conjugation by a Clifford given per-qubit images of X_q and Z_q.
template <class ImageX, class ImageZ>
PauliWord conjugate_by(const PauliWord& p, ImageX img_x, ImageZ img_z) {
    // Y = i X Z, so each Y letter contributes one factor of i
    const int n_y = std::popcount(p.x_mask() & p.z_mask());
    PauliWord out = PauliWord::identity().with_phase(p.phase() + n_y);
    for (int b = 0; b < 3 * kParticleSlots; ++b) {
        if ((p.x_mask() >> b) & 1u) out = out * img_x(b);
        if ((p.z_mask() >> b) & 1u) out = out * img_z(b);
    }
    return out;
}

QubitId qubit_of_bit(int b) {
    return {static_cast<Particle>(b / 3), static_cast<Role>(b % 3)};
}

}  // namespace

std::string_view particle_name(Particle p) { return kNames[slot(p)]; }

Particle parse_particle(std::string_view name) {
    for (int i = 0; i < kParticleSlots; ++i)
        if (kNames[i] == name) return static_cast<Particle>(i);
    throw std::invalid_argument("unknown particle '" + std::string(name) + "'");
}

PauliWord PauliWord::single(QubitId q, char letter) {
    const int c = letter_to_code(letter);
    const std::uint32_t bit = 1u << q.bit();
    return {(c & 1) ? bit : 0u, (c & 2) ? bit : 0u, 0};
}

PauliWord PauliWord::on(Particle p, std::string_view cxy) {
    if (cxy.size() != 3) throw std::invalid_argument("expected three letters (c, x, y)");
    PauliWord w;
    w = w * single({p, Role::coin}, cxy[0]);
    w = w * single({p, Role::x}, cxy[1]);
    w = w * single({p, Role::y}, cxy[2]);
    return w;
}

char PauliWord::letter(QubitId q) const { return code_letter(letter_code(*this, q.bit())); }

std::string PauliWord::letters(Particle p) const {
    return {letter({p, Role::coin}), letter({p, Role::x}), letter({p, Role::y})};
}

bool PauliWord::data_only() const { return ((x_ | z_) & ~kDataMask) == 0; }

bool PauliWord::single_particle() const {
    int n = 0;
    for (int i = 0; i < kParticleSlots; ++i)
        if ((x_ | z_) & particle_mask(static_cast<Particle>(i))) ++n;
    return n <= 1;
}

int PauliWord::weight() const { return std::popcount(x_ | z_); }

PauliWord PauliWord::restricted(Particle p) const {
    return {x_ & particle_mask(p), z_ & particle_mask(p), 0};
}

std::string PauliWord::render() const {
    std::string out = phase_text(phase_);
    static constexpr std::array<Particle, 6> order{Particle::PEX, Particle::P4, Particle::P3,
                                                   Particle::P2, Particle::P1, Particle::P0};
    for (Particle p : order) {
        if (!is_data(p) && !((x_ | z_) & particle_mask(p))) continue;
        const std::string l = letters(p);
        out += " (";
        out += l[0];
        out += ' ';
        out += l[1];
        out += ' ';
        out += l[2];
        out += ")_{";
        out += particle_name(p);
        out += '}';
    }
    return out;
}

PauliWord PauliWord::parse(std::string_view text) {
    std::size_t pos = text.find_first_not_of(' ');
    if (pos == std::string_view::npos) throw std::invalid_argument("empty Pauli text");
    const std::size_t sp = text.find(' ', pos);
    const std::string_view ph = text.substr(pos, sp == std::string_view::npos ? sp : sp - pos);
    int k = 0;
    if (ph == "+1") k = 0;
    else if (ph == "+i") k = 1;
    else if (ph == "-1") k = 2;
    else if (ph == "-i") k = 3;
    else throw std::invalid_argument("bad phase '" + std::string(ph) + "'");
    PauliWord w = identity().with_phase(k);
    pos = sp;
    while (pos != std::string_view::npos) {
        pos = text.find('(', pos);
        if (pos == std::string_view::npos) break;
        const std::size_t close = text.find(")_{", pos);
        const std::size_t end = text.find('}', close);
        if (close == std::string_view::npos || end == std::string_view::npos)
            throw std::invalid_argument("malformed particle group");
        std::string cxy;
        for (char c : text.substr(pos + 1, close - pos - 1))
            if (c != ' ') cxy += c;
        const Particle p = parse_particle(text.substr(close + 3, end - close - 3));
        if (w.restricted(p) != identity())
            throw std::invalid_argument("particle listed twice");
        w = w * on(p, cxy);
        pos = end;
    }
    return w;
}

PauliWord operator*(const PauliWord& a, const PauliWord& b) {
    int e = a.phase_ + b.phase_;
    const std::uint32_t both = (a.x_ | a.z_) & (b.x_ | b.z_);
    for (std::uint32_t m = both; m; m &= m - 1) {
        const int bit = std::countr_zero(m);
        e += product_phase(letter_code(a, bit), letter_code(b, bit));
    }
    return {a.x_ ^ b.x_, a.z_ ^ b.z_, e};
}

PauliWord pw_mul(const PauliWord& a, const PauliWord& b) { return a * b; }

bool commutes(const PauliWord& a, const PauliWord& b) {
    const int anti = std::popcount((a.x_mask() & b.z_mask()) ^ (a.z_mask() & b.x_mask()));
    return anti % 2 == 0;
}

Syndrome Syndrome::parse(std::string_view s) {
    if (s.size() != 6) throw std::invalid_argument("syndrome needs six bits m5..m0");
    unsigned v = 0;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("syndrome bits must be 0/1");
        v = (v << 1) | static_cast<unsigned>(c - '0');
    }
    return Syndrome(v);
}

std::string Syndrome::str() const {
    std::string s(6, '0');
    for (int i = 0; i < 6; ++i)
        if (bit(i)) s[5 - i] = '1';
    return s;
}

PauliWord CodeBasis::logical_y() const { return (logical_x * logical_z).times_phase(1); }

PauliWord CodeBasis::gauge_product_g() const {
    const auto& s = stabilizers;
    const auto& g = gauges;
    return (g[0] * g[2] * s[0] * s[1]) * (g[1] * g[3] * s[4]);
}

const CodeBasis& code_basis() {
    static const CodeBasis basis = [] {
        using P = Particle;
        auto word = [](std::string_view p4, std::string_view p2, std::string_view p0) {
            return PauliWord::on(P::P4, p4) * PauliWord::on(P::P2, p2) * PauliWord::on(P::P0, p0);
        };
        CodeBasis b;
        b.stabilizers = {word("III", "ZZI", "ZZI"), word("III", "ZIZ", "ZIZ"),
                         word("ZZI", "ZZI", "III"), word("ZIZ", "ZIZ", "III"),
                         word("III", "XXX", "XXX"), word("XXX", "XXX", "III")};
        b.gauges = {word("ZZI", "III", "III"), word("XIX", "XIX", "XIX"),
                    word("ZIZ", "III", "III"), word("XXI", "XXI", "XXI")};
        b.logical_z = word("ZZZ", "ZZZ", "ZZZ");
        b.logical_x = word("XXX", "III", "III");
        return b;
    }();
    return basis;
}

Syndrome syndrome_of(const PauliWord& e) {
    if (!e.data_only()) throw std::invalid_argument("syndrome_of: support outside P0, P2, P4");
    unsigned bits = 0;
    const auto& s = code_basis().stabilizers;
    for (int i = 0; i < 6; ++i)
        if (!commutes(e, s[i])) bits |= 1u << i;
    return Syndrome(bits);
}

bool equivalent_mod_gauge(const PauliWord& a, const PauliWord& b) {
    const PauliWord c = a * b.inverse();
    auto vec = [](const PauliWord& w) {
        return static_cast<std::uint64_t>(w.x_mask()) | (static_cast<std::uint64_t>(w.z_mask()) << 32);
    };
    // GF(2) row reduction of the ten generators, then reduce the target.
    std::vector<std::uint64_t> rows;
    const auto& cb = code_basis();
    for (const auto& s : cb.stabilizers) rows.push_back(vec(s));
    for (const auto& g : cb.gauges) rows.push_back(vec(g));
    std::vector<std::uint64_t> basis;
    for (std::uint64_t r : rows) {
        for (std::uint64_t v : basis)
            if (r & (std::uint64_t{1} << std::countr_zero(v))) r ^= v;
        if (!r) continue;
        for (auto& v : basis)
            if (v & (std::uint64_t{1} << std::countr_zero(r))) v ^= r;
        basis.push_back(r);
    }
    std::uint64_t t = vec(c);
    for (std::uint64_t v : basis)
        if (t & (std::uint64_t{1} << std::countr_zero(v))) t ^= v;
    return t == 0;
}

PauliWord conjugate_transversal(const PauliWord& p, TransversalGate u) {
    auto is_data_coin = [](int b) {
        const QubitId q = qubit_of_bit(b);
        return q.role == Role::coin && is_data(q.particle);
    };
    auto x_img = [&](int b) {
        const QubitId q = qubit_of_bit(b);
        if (!is_data_coin(b)) return PauliWord::single(q, 'X');
        if (u == TransversalGate::H) return PauliWord::single(q, 'Z');
        return PauliWord::single(q, 'Y').with_phase(2);  // X -> -Y
    };
    auto z_img = [&](int b) {
        const QubitId q = qubit_of_bit(b);
        if (!is_data_coin(b) || u == TransversalGate::ZS) return PauliWord::single(q, 'Z');
        return PauliWord::single(q, 'X');
    };
    return conjugate_by(p, x_img, z_img);
}

PauliWord conjugate_shift_two(const PauliWord& p) {
    auto x_img = [](int b) {
        const QubitId q = qubit_of_bit(b);
        if (q.role != Role::coin || !is_data(q.particle)) return PauliWord::single(q, 'X');
        return PauliWord::on(q.particle, "XXX");
    };
    auto z_img = [](int b) {
        const QubitId q = qubit_of_bit(b);
        if (q.role == Role::coin || !is_data(q.particle)) return PauliWord::single(q, 'Z');
        return PauliWord::single(q, 'Z') * PauliWord::single({q.particle, Role::coin}, 'Z');
    };
    return conjugate_by(p, x_img, z_img);
}

Decoded decode_lookup(Syndrome m) {
    using P = Particle;
    Decoded d;
    switch (m.phase_part()) {
        case 0b01: d.correction = PauliWord::on(P::P0, "ZII"); break;
        case 0b10: d.correction = PauliWord::on(P::P4, "ZII"); break;
        case 0b11: d.correction = PauliWord::on(P::P2, "ZII"); break;
        default: break;
    }
    static const std::map<unsigned, PauliWord> flips{
        {0b0001, PauliWord::on(P::P0, "IXI")}, {0b0010, PauliWord::on(P::P0, "IIX")},
        {0b0011, PauliWord::on(P::P0, "XII")}, {0b0100, PauliWord::on(P::P4, "IXI")},
        {0b1000, PauliWord::on(P::P4, "IIX")}, {0b1100, PauliWord::on(P::P4, "XII")},
        {0b0101, PauliWord::on(P::P2, "IXI")}, {0b1010, PauliWord::on(P::P2, "IIX")},
        {0b1111, PauliWord::on(P::P2, "XII")},
    };
    if (m.flip_part() != 0) {
        const auto it = flips.find(m.flip_part());
        if (it == flips.end()) {
            d.correctable = false;
            d.correction = PauliWord::identity();
            return d;
        }
        d.correction = d.correction * it->second;
    }
    return d;
}

const std::vector<TableRow>& table_rows() {
    static const std::vector<TableRow> rows = [] {
        using P = Particle;
        std::vector<TableRow> r{
            {"(Z_c)_P0", PauliWord::on(P::P0, "ZII"), Syndrome::parse("010000")},
            {"(Z_c)_P4", PauliWord::on(P::P4, "ZII"), Syndrome::parse("100000")},
            {"(Z_c)_P2", PauliWord::on(P::P2, "ZII"), Syndrome::parse("110000")},
            {"(X_x)_P0", PauliWord::on(P::P0, "IXI"), Syndrome::parse("000001")},
            {"(X_y)_P0", PauliWord::on(P::P0, "IIX"), Syndrome::parse("000010")},
            {"(X_c)_P0", PauliWord::on(P::P0, "XII"), Syndrome::parse("000011")},
            {"(X_x)_P4", PauliWord::on(P::P4, "IXI"), Syndrome::parse("000100")},
            {"(X_y)_P4", PauliWord::on(P::P4, "IIX"), Syndrome::parse("001000")},
            {"(X_c)_P4", PauliWord::on(P::P4, "XII"), Syndrome::parse("001100")},
            {"(X_x)_P2", PauliWord::on(P::P2, "IXI"), Syndrome::parse("000101")},
            {"(X_y)_P2", PauliWord::on(P::P2, "IIX"), Syndrome::parse("001010")},
            {"(X_c)_P2", PauliWord::on(P::P2, "XII"), Syndrome::parse("001111")},
            {"(Y_c)_P0", PauliWord::on(P::P0, "YII"), Syndrome::parse("010011")},
            {"(Y_c)_P4", PauliWord::on(P::P4, "YII"), Syndrome::parse("101100")},
            {"(Y_c)_P2", PauliWord::on(P::P2, "YII"), Syndrome::parse("111111")},
        };
        return r;
    }();
    return rows;
}

}  // namespace qwec
