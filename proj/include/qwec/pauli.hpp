#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qwec {

// Slot order matches the state-vector packing: P0 least significant, PEX last.
enum class Particle : std::uint8_t { P0 = 0, P1, P2, P3, P4, PEX };
inline constexpr int kParticleSlots = 6;
inline constexpr std::array<Particle, 3> kDataParticles{Particle::P0, Particle::P2, Particle::P4};
inline constexpr std::array<Particle, 2> kAncillas{Particle::P1, Particle::P3};

std::string_view particle_name(Particle p);
Particle parse_particle(std::string_view name);
constexpr int slot(Particle p) { return static_cast<int>(p); }
constexpr bool is_data(Particle p) {
    return p == Particle::P0 || p == Particle::P2 || p == Particle::P4;
}

// Value is the bit position inside a particle's 3-bit digit (b = 4c + 2x + y).
enum class Role : std::uint8_t { y = 0, x = 1, coin = 2 };

struct QubitId {
    Particle particle;
    Role role;
    constexpr int bit() const { return 3 * slot(particle) + static_cast<int>(role); }
    friend constexpr bool operator==(QubitId, QubitId) = default;
};

// Signed Pauli operator i^phase * (X^x Z^z with Y letters Hermitian) over the
// 18 (particle, role) qubits. Bit k of the masks is QubitId::bit().
class PauliWord {
public:
    constexpr PauliWord() = default;
    constexpr PauliWord(std::uint32_t x, std::uint32_t z, int phase = 0)
        : x_(x), z_(z), phase_(static_cast<std::uint8_t>(phase & 3)) {}

    static PauliWord identity() { return {}; }
    static PauliWord single(QubitId q, char letter);
    // letters given in (c, x, y) order, e.g. on(Particle::P4, "ZZI")
    static PauliWord on(Particle p, std::string_view cxy);
    static PauliWord parse(std::string_view text);

    std::uint32_t x_mask() const { return x_; }
    std::uint32_t z_mask() const { return z_; }
    int phase() const { return phase_; }  // power of i
    char letter(QubitId q) const;
    std::string letters(Particle p) const;  // "c x y" triple without spaces

    bool is_identity_up_to_phase() const { return x_ == 0 && z_ == 0; }
    bool is_hermitian() const { return (phase_ & 1) == 0; }
    bool data_only() const;
    bool single_particle() const;
    int weight() const;

    PauliWord with_phase(int phase) const { return {x_, z_, phase}; }
    PauliWord times_phase(int phase) const { return {x_, z_, phase_ + phase}; }
    PauliWord inverse() const { return {x_, z_, -phase_}; }
    // Restriction of the letters to one particle, phase +1.
    PauliWord restricted(Particle p) const;

    std::string render() const;

    friend PauliWord operator*(const PauliWord& a, const PauliWord& b);
    friend bool operator==(const PauliWord&, const PauliWord&) = default;

private:
    std::uint32_t x_ = 0;
    std::uint32_t z_ = 0;
    std::uint8_t phase_ = 0;
};

PauliWord pw_mul(const PauliWord& a, const PauliWord& b);
bool commutes(const PauliWord& a, const PauliWord& b);

// Six bits, bit i set when the error anticommutes with s_i.
class Syndrome {
public:
    constexpr Syndrome() = default;
    constexpr explicit Syndrome(unsigned bits) : bits_(static_cast<std::uint8_t>(bits & 0x3F)) {}
    static Syndrome parse(std::string_view m5_to_m0);

    constexpr unsigned bits() const { return bits_; }
    constexpr bool bit(int i) const { return (bits_ >> i) & 1u; }
    constexpr unsigned phase_part() const { return bits_ >> 4; }   // m5 m4
    constexpr unsigned flip_part() const { return bits_ & 0xF; }   // m3..m0
    std::string str() const;  // "m5m4m3m2m1m0"

    friend constexpr Syndrome operator^(Syndrome a, Syndrome b) { return Syndrome(a.bits_ ^ b.bits_); }
    friend constexpr bool operator==(Syndrome, Syndrome) = default;

private:
    std::uint8_t bits_ = 0;
};

struct CodeBasis {
    std::array<PauliWord, 6> stabilizers;  // s0..s5
    std::array<PauliWord, 4> gauges;       // g0Z, g0X, g1Z, g1X
    PauliWord logical_z;
    PauliWord logical_x;

    PauliWord logical_y() const;        // i X Z
    PauliWord gauge_product_g() const;  // (g0Z g1Z s0 s1)(g0X g1X s4)
};

const CodeBasis& code_basis();

Syndrome syndrome_of(const PauliWord& e);
bool equivalent_mod_gauge(const PauliWord& a, const PauliWord& b);

enum class TransversalGate { H, ZS };
PauliWord conjugate_transversal(const PauliWord& p, TransversalGate u);
// Conjugation of data letters by the controlled (X_x X_y) that a two-step
// clockwise shift applies; maps between the two data frames of a cycle.
PauliWord conjugate_shift_two(const PauliWord& p);

struct Decoded {
    PauliWord correction;
    bool correctable = true;
};
Decoded decode_lookup(Syndrome m);

// Operators whose syndromes are listed in the lookup table, plus the three
// coin Y flips (phase and bit rows on the same particle).
struct TableRow {
    std::string label;
    PauliWord op;
    Syndrome printed;
};
const std::vector<TableRow>& table_rows();

}  // namespace qwec
