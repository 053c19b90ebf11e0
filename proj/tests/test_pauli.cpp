#include <doctest.h>

#include <random>

#include "qwec/oracle.hpp"
#include "qwec/pauli.hpp"

using namespace qwec;

namespace {

PauliWord random_data_word(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> letter(0, 3), phase(0, 3);
    PauliWord w = PauliWord::identity().with_phase(phase(rng));
    for (Particle p : kDataParticles)
        for (Role r : {Role::coin, Role::x, Role::y}) w = w * PauliWord::single({p, r}, "IXYZ"[letter(rng)]);
    return w;
}

PauliWord random_particle_word(std::mt19937_64& rng, Particle p) {
    std::uniform_int_distribution<int> letter(0, 3), phase(0, 3);
    PauliWord w = PauliWord::identity().with_phase(phase(rng));
    for (Role r : {Role::coin, Role::x, Role::y}) w = w * PauliWord::single({p, r}, "IXYZ"[letter(rng)]);
    return w;
}

}  // namespace

TEST_CASE("render and parse round trip") {
    const std::string text = "+1 (Z Z I)_{P4} (Z Z I)_{P2} (I I I)_{P0}";
    const PauliWord w = PauliWord::parse(text);
    CHECK(w.render() == text);
    CHECK(w == PauliWord::on(Particle::P4, "ZZI") * PauliWord::on(Particle::P2, "ZZI"));
    CHECK(PauliWord::parse("-i (I X I)_{P2} (I I I)_{P4} (I I I)_{P0}").phase() == 3);
    CHECK_THROWS(PauliWord::parse("+1 (Z Q I)_{P4}"));
    CHECK_THROWS(PauliWord::parse("+1 (Z Z I)_{P9}"));
}

TEST_CASE("single-qubit products carry the Pauli phases") {
    const QubitId q{Particle::P0, Role::coin};
    const auto x = PauliWord::single(q, 'X'), y = PauliWord::single(q, 'Y'), z = PauliWord::single(q, 'Z');
    CHECK(x * y == z.times_phase(1));  // XY = iZ
    CHECK(y * z == x.times_phase(1));
    CHECK(z * x == y.times_phase(1));
    CHECK(x * z == y.times_phase(3));  // XZ = -iY
    CHECK(y * y == PauliWord::identity());
    CHECK(pw_mul(x, x) == PauliWord::identity());
}

TEST_CASE("products and commutation agree with dense matrices") {
    std::mt19937_64 rng(11);
    const auto ordering = oracle::particle_ordering(Particle::P2);
    for (int trial = 0; trial < 200; ++trial) {
        const PauliWord a = random_particle_word(rng, Particle::P2), b = random_particle_word(rng, Particle::P2);
        const auto da = oracle::dense_of(a, ordering).matrix, db = oracle::dense_of(b, ordering).matrix;
        CHECK(oracle::max_abs(oracle::dense_of(a * b, ordering).matrix - da * db) < 1e-14);
        CHECK(commutes(a, b) == (oracle::max_abs(da * db - db * da) < 1e-14));
        CHECK(a * a.inverse() == PauliWord::identity());
    }
}

TEST_CASE("multiplication is associative on data words") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const auto a = random_data_word(rng), b = random_data_word(rng), c = random_data_word(rng);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("syndrome text is m5 down to m0") {
    const Syndrome s = Syndrome::parse("010100");
    CHECK(s.bits() == 0b010100u);
    CHECK(s.phase_part() == 0b01u);
    CHECK(s.flip_part() == 0b0100u);
    CHECK(s.str() == "010100");
    CHECK_THROWS(Syndrome::parse("0101"));
}

TEST_CASE("code basis commutation relations") {
    const auto& cb = code_basis();
    for (const auto& s : cb.stabilizers) {
        CHECK(s.is_hermitian());
        for (const auto& t : cb.stabilizers) CHECK(commutes(s, t));
        for (const auto& g : cb.gauges) CHECK(commutes(s, g));
        CHECK(commutes(s, cb.logical_x));
        CHECK(commutes(s, cb.logical_z));
    }
    for (const auto& g : cb.gauges) {
        CHECK(commutes(g, cb.logical_x));
        CHECK(commutes(g, cb.logical_z));
    }
    CHECK_FALSE(commutes(cb.logical_x, cb.logical_z));
    CHECK_FALSE(commutes(cb.gauges[0], cb.gauges[1]));
    CHECK_FALSE(commutes(cb.gauges[2], cb.gauges[3]));
    CHECK(commutes(cb.gauges[0], cb.gauges[2]));
    CHECK(commutes(cb.gauges[1], cb.gauges[3]));
    CHECK(cb.logical_y() == (cb.logical_x * cb.logical_z).times_phase(1));
    CHECK(cb.logical_y().is_hermitian());
}

TEST_CASE("logical operators decompose into gauges, stabilizers and coin letters") {
    const auto& cb = code_basis();
    PauliWord zc, xc;
    for (Particle p : kDataParticles) {
        zc = zc * PauliWord::single({p, Role::coin}, 'Z');
        xc = xc * PauliWord::single({p, Role::coin}, 'X');
    }
    CHECK(cb.logical_z == cb.gauges[0] * cb.gauges[2] * cb.stabilizers[0] * cb.stabilizers[1] * zc);
    CHECK(cb.logical_x == cb.gauges[1] * cb.gauges[3] * cb.stabilizers[4] * xc);
}

TEST_CASE("gauge-equivalent Z flips on P2") {
    const auto& cb = code_basis();
    const PauliWord zc = PauliWord::on(Particle::P2, "ZII"), zx = PauliWord::on(Particle::P2, "IZI");
    CHECK(cb.gauges[0] * cb.stabilizers[2] * zc == zx);
    CHECK(syndrome_of(zc) == syndrome_of(zx));
    CHECK(equivalent_mod_gauge(zc, zx));
    CHECK_FALSE(equivalent_mod_gauge(zc, cb.logical_z * zc));
}

TEST_CASE("table rows reproduce their syndromes") {
    const auto& rows = table_rows();
    REQUIRE(rows.size() == 15);
    for (const auto& row : rows) {
        INFO(row.label);
        CHECK(syndrome_of(row.op) == row.printed);
    }
    // value confirmed by running the walk cycle on an encoded state
    CHECK(syndrome_of(PauliWord::on(Particle::P2, "XII")).str() == "001111");
    CHECK(syndrome_of(PauliWord::on(Particle::P2, "YII")).str() == "111111");
}

TEST_CASE("syndrome_of rejects operators outside the data particles") {
    CHECK_THROWS(syndrome_of(PauliWord::on(Particle::P1, "XII")));
}

TEST_CASE("decode_lookup examples") {
    const Decoded d = decode_lookup(Syndrome::parse("010100"));
    CHECK(d.correctable);
    CHECK(equivalent_mod_gauge(d.correction, PauliWord::on(Particle::P0, "ZII") * PauliWord::on(Particle::P4, "IXI")));
    CHECK(decode_lookup(Syndrome()).correction == PauliWord::identity());
    const Decoded y = decode_lookup(Syndrome::parse("111111"));
    CHECK(y.correctable);
    CHECK(syndrome_of(y.correction).str() == "111111");
}

TEST_CASE("every single-qubit data flip is corrected up to gauge") {
    int cases = 0;
    for (Particle p : kDataParticles)
        for (Role r : {Role::coin, Role::x, Role::y})
            for (char l : {'X', 'Y', 'Z'}) {
                const PauliWord e = PauliWord::single({p, r}, l);
                const Decoded d = decode_lookup(syndrome_of(e));
                INFO(e.render());
                REQUIRE(d.correctable);
                CHECK(equivalent_mod_gauge(d.correction * e, PauliWord::identity()));
                ++cases;
            }
    CHECK(cases == 27);
}

TEST_CASE("bit patterns outside the table are flagged uncorrectable") {
    const PauliWord e = PauliWord::on(Particle::P0, "IIX") * PauliWord::on(Particle::P4, "IXI");
    CHECK(syndrome_of(e).flip_part() == 0b0110u);
    CHECK_FALSE(decode_lookup(syndrome_of(e)).correctable);
}

TEST_CASE("transversal conjugation") {
    const auto& cb = code_basis();
    CHECK(conjugate_transversal(PauliWord::identity(), TransversalGate::H) == PauliWord::identity());
    CHECK(conjugate_transversal(cb.logical_z, TransversalGate::H) == cb.gauge_product_g() * cb.logical_x);
    // the X image lands outside the stabilizer normalizer: it anticommutes with s2
    const PauliWord hx = conjugate_transversal(cb.logical_x, TransversalGate::H);
    CHECK(hx == PauliWord::on(Particle::P4, "ZXX"));
    CHECK_FALSE(commutes(hx, cb.stabilizers[2]));
    CHECK(conjugate_transversal(cb.logical_z, TransversalGate::ZS) == cb.logical_z);
    const QubitId c{Particle::P0, Role::coin};
    CHECK(conjugate_transversal(PauliWord::single(c, 'X'), TransversalGate::ZS) == PauliWord::single(c, 'Y').times_phase(2));
    CHECK(conjugate_transversal(PauliWord::single(c, 'Y'), TransversalGate::ZS) == PauliWord::single(c, 'X'));
}

TEST_CASE("two-step shift conjugation") {
    CHECK(conjugate_shift_two(PauliWord::on(Particle::P0, "XII")) == PauliWord::on(Particle::P0, "XXX"));
    CHECK(conjugate_shift_two(PauliWord::on(Particle::P2, "IZI")) == PauliWord::on(Particle::P2, "ZZI"));
    CHECK(conjugate_shift_two(PauliWord::on(Particle::P4, "IIZ")) == PauliWord::on(Particle::P4, "ZIZ"));
    CHECK(conjugate_shift_two(PauliWord::on(Particle::P4, "ZXX")) == PauliWord::on(Particle::P4, "ZXX"));
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto w = random_data_word(rng);
        CHECK(conjugate_shift_two(conjugate_shift_two(w)) == w);
    }
}
