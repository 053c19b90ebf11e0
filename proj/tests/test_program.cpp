#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "qwec/codec.hpp"
#include "qwec/oracle.hpp"
#include "qwec/program.hpp"

using namespace qwec;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

StateVector random_state(Layout layout, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    StateVector s(layout);
    for (auto& a : s.amplitudes()) a = {n(rng), n(rng)};
    s.normalize();
    return s;
}

oracle::Dense single_particle_map(const WalkProgram& program) {
    std::vector<StateVector> basis;
    for (std::size_t b = 0; b < 8; ++b) {
        StateVector s(Layout::nested());
        s[b] = 1;
        basis.push_back(s);
    }
    return oracle::extract_unitary(program, basis, basis);
}

double transform_deviation(const oracle::Dense& w) {
    const oracle::Dense xxx = dense_on_particle(PauliWord::on(Particle::P0, "XXX"), Particle::P0);
    const oracle::Dense zzz = dense_on_particle(PauliWord::on(Particle::P0, "ZZZ"), Particle::P0);
    return std::max(oracle::max_abs(w * xxx - zzz * w), oracle::max_abs(w * zzz - xxx * w));
}

}  // namespace

TEST_CASE("syndrome step listing matches the golden file") {
    const std::string golden = read_file(std::string(QWEC_TEST_DATA) + "/golden/syndrome_s0_s2.txt");
    REQUIRE_FALSE(golden.empty());
    CHECK(build_syndrome_step(StabilizerPair::s0_s2).listing() == golden);
}

TEST_CASE("iteration counts") {
    CHECK(build_full_cycle(0).iteration_count() == 34);
    CHECK(build_full_cycle(1).iteration_count() == 34);
    CHECK(build_cnot_middle_block().iteration_count() == 8);
    CHECK(build_cnot_coin_to_logical().iteration_count() == 24);
    const std::array<Particle, 1> p0{Particle::P0};
    CHECK(build_basis_transform(p0).iteration_count() == 8);
    CHECK(build_basis_transform({}).steps.empty());
    CHECK(build_gauge_zz_measurement().iteration_count() == 8);
}

TEST_CASE("basis transforms contain no neighbor steps") {
    const std::array<Particle, 3> data{Particle::P0, Particle::P2, Particle::P4};
    for (DataFrame f : {DataFrame::unshifted, DataFrame::shifted})
        for (const auto& step : build_basis_transform(data, f).steps) CHECK_FALSE(std::holds_alternative<NeighborStep>(step));
    const std::array<Particle, 1> bad{Particle::P1};
    CHECK_THROWS(build_basis_transform(bad));
}

TEST_CASE("basis transform swaps the XXX and ZZZ eigenbases") {
    const std::array<Particle, 1> p0{Particle::P0};
    CHECK(transform_deviation(single_particle_map(build_basis_transform(p0))) < 1e-12);
}

TEST_CASE("the three listed coin patterns at steps 3, 4, 5 do not swap the eigenbases") {
    using enum Vertex;
    CoinSpec third, fourth, fifth;
    third.set(Particle::P0, {v00, v11}, coins::H()).set(Particle::P0, {v10, v01}, coins::H_prime());
    fourth.set(Particle::P0, {v00, v01}, coins::H()).set(Particle::P0, {v10, v11}, coins::H_prime());
    fifth.set(Particle::P0, {v00, v10}, coins::H()).set(Particle::P0, {v11, v01}, coins::H_prime());
    WalkProgram literal;
    for (int it = 1; it <= 8; ++it) {
        const CoinSpec spec = it == 3 ? third : it == 4 ? fourth : it == 5 ? fifth : CoinSpec{};
        literal.add(CoinStep{spec}).add(ShiftStep{});
    }
    const double dev = transform_deviation(single_particle_map(literal));
    CHECK(dev == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("program execution agrees with the dense reference") {
    std::mt19937_64 rng(8);
    const WalkProgram cnot = build_cnot_coin_to_logical();
    StateVector a = random_state(Layout::with_external(), rng);
    StateVector b = a;
    run_unitary(cnot, a);
    for (const auto& step : cnot.steps) oracle::apply_step_dense(b, step);
    CHECK(max_deviation(a, b) < 1e-12);
}

TEST_CASE("programs are invertible by the reversed adjoint program") {
    std::mt19937_64 rng(9);
    const WalkProgram p = build_cnot_coin_to_logical();
    const StateVector start = random_state(Layout::with_external(), rng);
    StateVector s = start;
    run_unitary(p, s);
    for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) {
        if (const auto* c = std::get_if<CoinStep>(&*it)) {
            CoinSpec inv;
            for (int k = 0; k < kParticleSlots; ++k)
                for (Vertex v : kClockwise)
                    if (const auto& u = c->spec.at(static_cast<Particle>(k), v)) inv.set(static_cast<Particle>(k), v, u->adjoint());
            apply_coin(s, inv);
        } else if (std::holds_alternative<ShiftStep>(*it)) {
            for (int k = 0; k < 3; ++k) apply_shift(s);
        } else if (std::holds_alternative<NeighborStep>(*it)) {
            apply_neighbor(s);
        }
    }
    CHECK(max_deviation(s, start) < 1e-12);
}

TEST_CASE("run_unitary refuses measuring programs") {
    StateVector s = ground_state(Layout::nested());
    CHECK_THROWS_AS(run_unitary(build_full_cycle(0), s), std::invalid_argument);
}

TEST_CASE("syndrome measurements are deterministic on stabilizer eigenstates") {
    for (int sign : {1, -1}) {
        ForcedSigns signs;
        signs.stabilizers = {1, 1, 1, 1, sign, -sign};
        Session s = prepare_logical_zero(Layout::nested(), signs);
        // a coin flip on P0 turns s0 and s1 to -1
        apply_pauli(s.state, PauliWord::on(Particle::P0, "XII"));
        const auto branches = run_branches(build_full_cycle(0), s.state);
        REQUIRE(branches.size() == 1);
        const Branch& b = branches.front();
        CHECK(b.probability == doctest::Approx(1.0));
        CHECK(b.bit("s0") == 1);
        CHECK(b.bit("s1") == 1);
        CHECK(b.bit("s2") == 0);
        CHECK(b.bit("s3") == 0);
        CHECK(b.bit("s4") == (sign == -1));
        CHECK(b.bit("s5") == (sign == 1));
        // P1 records s0, s1, s4 and P3 records s2, s3, s5
        for (const auto& r : b.records) {
            const bool first_ancilla = r.tag == "s0" || r.tag == "s1" || r.tag == "s4";
            CHECK(r.particle == (first_ancilla ? Particle::P1 : Particle::P3));
        }
    }
}

TEST_CASE("branches, forced and sampled runs are consistent") {
    std::mt19937_64 rng(10);
    Session s = prepare_logical_zero(Layout::nested());
    apply_pauli(s.state, PauliWord::on(Particle::P2, "XII"));
    const auto branches = run_branches(build_full_cycle(0), s.state);
    double total = 0;
    for (const auto& b : branches) total += b.probability;
    CHECK(total == doctest::Approx(1.0));
    const Branch sampled = run_sampled(build_full_cycle(0), s.state, rng);
    std::vector<int> outcomes;
    for (const auto& r : sampled.records) outcomes.push_back(r.bit);
    const Branch forced = run_forced(build_full_cycle(0), s.state, outcomes);
    CHECK(max_deviation(forced.state, sampled.state) < 1e-12);
}

TEST_CASE("injection hook fires at the cycle start") {
    std::vector<std::string> seen;
    const InjectionHook hook = [&](std::string_view tag, StateVector&) { seen.emplace_back(tag); };
    run_branches(build_full_cycle(1), prepare_logical_zero(Layout::nested()).state, hook);
    REQUIRE(seen.size() == 1);
    CHECK(seen.front() == "cycle-start");
}

TEST_CASE("programs that need the external particle say so") {
    CHECK(build_cnot_coin_to_logical().requires_external);
    CHECK(build_cphase().requires_external);
    StateVector s = ground_state(Layout::nested());
    CHECK_THROWS(run_unitary(build_cphase(), s));
}
