#include "qwec/program.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qwec {

namespace {

constexpr Vertex v00 = Vertex::v00, v01 = Vertex::v01, v10 = Vertex::v10, v11 = Vertex::v11;

std::string coin_name(const Mat2& u) {
    static const std::vector<std::pair<const char*, Mat2>> named{
        {"I", coins::I()},   {"X", coins::X()},  {"Y", coins::Y()},   {"Z", coins::Z()},
        {"H", coins::H()},   {"H'", coins::H_prime()}, {"S", coins::S()}, {"ZS", coins::ZS()},
        {"T", coins::T()},
    };
    for (const auto& [name, m] : named)
        if ((u - m).cwiseAbs().maxCoeff() < 1e-12) return name;
    std::ostringstream os;
    os.precision(6);
    os << "U[";
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) os << (r || c ? " " : "") << u(r, c).real() << "," << u(r, c).imag();
    os << "]";
    return os.str();
}

// One [Coin, Shift, Neighbor] iteration with X on both ancillas at the given vertices.
void ancilla_iterations(WalkProgram& p, std::initializer_list<Vertex> vs, int count) {
    CoinSpec spec;
    spec.set(Particle::P1, vs, coins::X()).set(Particle::P3, vs, coins::X());
    for (int i = 0; i < count; ++i) {
        p.add(CoinStep{spec}).add(ShiftStep{}).add(NeighborStep{});
    }
}

void hadamard_ancillas(WalkProgram& p) {
    p.add(LocalCoinStep{Particle::P1, coins::H()}).add(LocalCoinStep{Particle::P3, coins::H()});
}

void measure_and_reset(WalkProgram& p, std::string_view tag1, std::string_view tag3) {
    p.add(MeasureCoinStep{Particle::P1, std::string(tag1)})
        .add(MeasureCoinStep{Particle::P3, std::string(tag3)})
        .add(ResetAncillaStep{Particle::P1})
        .add(ResetAncillaStep{Particle::P3});
}

CoinSpec all_vertices(std::span<const Particle> ps, const Mat2& u) {
    CoinSpec spec;
    for (Particle p : ps) spec.set_all(p, u);
    return spec;
}

}  // namespace

WalkProgram& WalkProgram::append(const WalkProgram& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
    requires_external = requires_external || other.requires_external;
    for (Particle p : other.returns_to_origin)
        if (std::find(returns_to_origin.begin(), returns_to_origin.end(), p) == returns_to_origin.end())
            returns_to_origin.push_back(p);
    return *this;
}

WalkProgram& WalkProgram::add(WalkStep step) {
    steps.push_back(std::move(step));
    return *this;
}

int WalkProgram::iteration_count() const {
    return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const WalkStep& s) {
        return std::holds_alternative<ShiftStep>(s);
    }));
}

bool WalkProgram::has_measurements() const {
    return std::any_of(steps.begin(), steps.end(), [](const WalkStep& s) {
        return std::holds_alternative<MeasureCoinStep>(s) || std::holds_alternative<ResetAncillaStep>(s);
    });
}

std::string WalkProgram::listing() const {
    std::ostringstream os;
    os << "# " << name << "\n";
    char idx[16];
    for (std::size_t i = 0; i < steps.size(); ++i) {
        std::snprintf(idx, sizeof idx, "%04zu ", i);
        os << idx;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, CoinStep>) {
                    os << "Coin";
                    for (int k = 0; k < kParticleSlots; ++k) {
                        const Particle p = static_cast<Particle>(k);
                        for (Vertex v : {v00, v10, v11, v01})
                            if (const auto& u = s.spec.at(p, v))
                                os << ' ' << particle_name(p) << '@' << vertex_label(v) << '=' << coin_name(*u);
                    }
                } else if constexpr (std::is_same_v<T, ShiftStep>) {
                    os << "Shift";
                } else if constexpr (std::is_same_v<T, NeighborStep>) {
                    os << "Neighbor";
                } else if constexpr (std::is_same_v<T, LocalCoinStep>) {
                    os << "LocalCoin " << particle_name(s.particle) << '=' << coin_name(s.unitary);
                } else if constexpr (std::is_same_v<T, MeasureCoinStep>) {
                    os << "MeasureCoin " << particle_name(s.particle) << " -> " << s.tag;
                } else if constexpr (std::is_same_v<T, ResetAncillaStep>) {
                    os << "ResetAncilla " << particle_name(s.particle);
                } else {
                    os << "InjectionPoint " << s.tag;
                }
            },
            steps[i]);
        os << "\n";
    }
    return os.str();
}

WalkProgram build_syndrome_step(StabilizerPair pair, DataFrame frame) {
    WalkProgram p;
    p.returns_to_origin = {Particle::P1, Particle::P3};
    switch (pair) {
        case StabilizerPair::s0_s2:
            p.name = "syndrome s0,s2";
            hadamard_ancillas(p);
            ancilla_iterations(p, {v10, v11}, 6);
            hadamard_ancillas(p);
            measure_and_reset(p, "s0", "s2");
            break;
        case StabilizerPair::s1_s3:
            p.name = "syndrome s1,s3";
            hadamard_ancillas(p);
            ancilla_iterations(p, {v11, v01}, 6);
            hadamard_ancillas(p);
            measure_and_reset(p, "s1", "s3");
            break;
        case StabilizerPair::s4_s5: {
            p.name = "syndrome s4,s5";
            const auto data = std::span<const Particle>(kDataParticles);
            p.append(build_basis_transform(data, frame));
            hadamard_ancillas(p);
            ancilla_iterations(p, {v10, v01}, 6);
            hadamard_ancillas(p);
            measure_and_reset(p, "s4", "s5");
            p.append(build_basis_transform(data, flipped(frame)));
            break;
        }
    }
    return p;
}

WalkProgram build_basis_transform(std::span<const Particle> targets, DataFrame frame) {
    WalkProgram p;
    p.name = "basis transform";
    for (Particle t : targets)
        if (!is_data(t)) throw std::invalid_argument("basis transform targets must be data particles");
    if (targets.empty()) return p;
    // H on 00/11 and H' on 10/01; one coin iteration placed so that its two
    // flanking shift pairs cancel on the current frame.
    CoinSpec pattern;
    for (Particle t : targets)
        pattern.set(t, {v00, v11}, coins::H()).set(t, {v10, v01}, coins::H_prime());
    const int active = frame == DataFrame::unshifted ? 3 : 5;
    for (int it = 1; it <= 8; ++it) {
        p.add(CoinStep{it == active ? pattern : CoinSpec{}}).add(ShiftStep{});
    }
    return p;
}

WalkProgram build_full_cycle(int parity) {
    WalkProgram p;
    p.name = parity % 2 == 0 ? "cycle parity 0" : "cycle parity 1";
    p.add(InjectionPointStep{"cycle-start"});
    if (parity % 2 == 0) {
        p.append(build_syndrome_step(StabilizerPair::s0_s2));
        p.append(build_syndrome_step(StabilizerPair::s1_s3));
    } else {
        p.append(build_syndrome_step(StabilizerPair::s1_s3));
        p.append(build_syndrome_step(StabilizerPair::s0_s2));
    }
    // the two 6-iteration blocks leave the frame where the cycle started
    p.append(build_syndrome_step(StabilizerPair::s4_s5, cycle_entry_frame(parity)));
    return p;
}

WalkProgram build_cnot_middle_block() {
    WalkProgram p;
    p.name = "cnot middle block";
    p.requires_external = true;
    const CoinSpec spec = all_vertices(kDataParticles, coins::X());
    for (int i = 0; i < 8; ++i) p.add(CoinStep{spec}).add(ShiftStep{}).add(NeighborStep{});
    return p;
}

WalkProgram build_cnot_coin_to_logical(DataFrame frame) {
    static constexpr std::array<Particle, 1> p4{Particle::P4};
    WalkProgram p;
    p.name = "cnot PEX coin -> logical";
    p.requires_external = true;
    p.append(build_basis_transform(p4, frame));
    p.append(build_cnot_middle_block());
    p.append(build_basis_transform(p4, frame));
    return p;
}

WalkProgram build_cphase(DataFrame frame) {
    WalkProgram bracket;
    bracket.add(LocalCoinStep{Particle::PEX, coins::H()});
    bracket.append(build_logical_clifford(LogicalClifford::H));
    WalkProgram p;
    p.name = "cphase logical -> PEX coin";
    p.requires_external = true;
    p.append(bracket).append(build_cnot_coin_to_logical(frame)).append(bracket);
    return p;
}

WalkProgram build_gauge_zz_measurement() {
    WalkProgram p;
    p.name = "gauge zz";
    p.returns_to_origin = {Particle::P1, Particle::P3};
    p.add(ShiftStep{});
    hadamard_ancillas(p);
    ancilla_iterations(p, {v01, v10}, 6);
    hadamard_ancillas(p);
    measure_and_reset(p, "gzz.P1", "gzz.P3");
    p.add(ShiftStep{});
    return p;
}

WalkProgram build_gauge_xx_measurement(DataFrame frame) {
    const auto data = std::span<const Particle>(kDataParticles);
    WalkProgram p;
    p.name = "gauge xx";
    p.append(build_basis_transform(data, frame));
    WalkProgram zz = build_gauge_zz_measurement();
    for (auto& s : zz.steps)
        if (auto* m = std::get_if<MeasureCoinStep>(&s)) m->tag = m->particle == Particle::P1 ? "gxx.P1" : "gxx.P3";
    p.append(zz);
    p.append(build_basis_transform(data, frame));
    return p;
}

WalkProgram build_logical_clifford(LogicalClifford gate) {
    WalkProgram p;
    switch (gate) {
        case LogicalClifford::H:
            p.name = "logical H";
            p.add(CoinStep{all_vertices(kDataParticles, coins::H())});
            break;
        case LogicalClifford::S:
            p.name = "logical S";
            p.add(CoinStep{all_vertices(kDataParticles, coins::ZS())});
            break;
        case LogicalClifford::Z:
            p.name = "logical Z";
            p.add(CoinStep{all_vertices(kDataParticles, coins::Z())});
            break;
    }
    return p;
}

// ---- execution ----

int Branch::bit(std::string_view tag) const {
    for (const auto& r : records)
        if (r.tag == tag) return r.bit;
    throw std::out_of_range("no measurement tagged '" + std::string(tag) + "'");
}

namespace {

// Picks which outcomes to follow given the probability of outcome 1.
using Chooser = std::function<std::vector<int>(double p1)>;

void check_return(const WalkProgram& prog, const StateVector& s, Particle measured) {
    if (std::find(prog.returns_to_origin.begin(), prog.returns_to_origin.end(), measured) ==
        prog.returns_to_origin.end())
        return;
    const auto m = vertex_marginal(s, measured);
    if (m[code(Vertex::v00)] < 1.0 - 1e-10) {
        char missing[32];
        std::snprintf(missing, sizeof missing, "%.3e", 1.0 - m[code(Vertex::v00)]);
        throw ProtocolError(std::string(particle_name(measured)) + " did not return to vertex 00 in " + prog.name +
                            " (missing weight " + missing + ")");
    }
}

void execute(const WalkProgram& prog, std::size_t from, Branch br, const Chooser& choose,
             const InjectionHook& hook, std::vector<Branch>& out) {
    if (prog.requires_external && !br.state.layout().external)
        throw std::invalid_argument(prog.name + " needs the external particle");
    for (std::size_t i = from; i < prog.steps.size(); ++i) {
        const WalkStep& step = prog.steps[i];
        if (const auto* c = std::get_if<CoinStep>(&step)) {
            apply_coin(br.state, c->spec);
        } else if (std::holds_alternative<ShiftStep>(step)) {
            apply_shift(br.state);
        } else if (std::holds_alternative<NeighborStep>(step)) {
            apply_neighbor(br.state);
        } else if (const auto* l = std::get_if<LocalCoinStep>(&step)) {
            apply_local_coin(br.state, l->particle, l->unitary);
        } else if (const auto* inj = std::get_if<InjectionPointStep>(&step)) {
            if (hook) hook(inj->tag, br.state);
        } else if (const auto* r = std::get_if<ResetAncillaStep>(&step)) {
            int last = -1;
            for (const auto& rec : br.records)
                if (rec.particle == r->particle) last = rec.bit;
            if (last < 0) throw ProtocolError("reset of an unmeasured ancilla");
            if (last == 1) apply_local_coin(br.state, r->particle, coins::X());
        } else if (const auto* m = std::get_if<MeasureCoinStep>(&step)) {
            check_return(prog, br.state, m->particle);
            const double p1 = coin_one_probability(br.state, m->particle);
            const std::vector<int> bits = choose(p1);
            for (std::size_t k = 0; k < bits.size(); ++k) {
                Branch next = k + 1 == bits.size() ? std::move(br) : br;
                const auto meas = collapse_coin(next.state, m->particle, bits[k]);
                next.probability *= meas.probability;
                next.records.push_back({m->tag, m->particle, bits[k]});
                execute(prog, i + 1, std::move(next), choose, hook, out);
            }
            return;
        }
    }
    out.push_back(std::move(br));
}

Branch run_single(const WalkProgram& prog, StateVector state, const Chooser& choose,
                  const InjectionHook& hook) {
    std::vector<Branch> out;
    execute(prog, 0, Branch{std::move(state), 1.0, {}}, choose, hook, out);
    return std::move(out.front());
}

}  // namespace

void run_unitary(const WalkProgram& program, StateVector& state) {
    if (program.has_measurements()) throw std::invalid_argument(program.name + " contains measurements");
    std::vector<Branch> out;
    execute(program, 0, Branch{std::move(state), 1.0, {}}, {}, {}, out);
    state = std::move(out.front().state);
}

Branch run_sampled(const WalkProgram& program, StateVector state, std::mt19937_64& rng,
                   const InjectionHook& hook) {
    return run_single(program, std::move(state),
                      [&rng](double p1) {
                          std::uniform_real_distribution<double> u(0.0, 1.0);
                          return std::vector<int>{u(rng) < p1 ? 1 : 0};
                      },
                      hook);
}

Branch run_forced(const WalkProgram& program, StateVector state, std::span<const int> outcomes,
                  const InjectionHook& hook) {
    std::size_t next = 0;
    return run_single(program, std::move(state),
                      [&](double) {
                          if (next >= outcomes.size()) throw std::invalid_argument("not enough forced outcomes");
                          return std::vector<int>{outcomes[next++]};
                      },
                      hook);
}

std::vector<Branch> run_branches(const WalkProgram& program, StateVector state, const InjectionHook& hook) {
    std::vector<Branch> out;
    execute(program, 0, Branch{std::move(state), 1.0, {}},
            [](double p1) {
                std::vector<int> bits;
                if (1.0 - p1 >= 1e-12) bits.push_back(0);
                if (p1 >= 1e-12) bits.push_back(1);
                return bits;
            },
            hook, out);
    return out;
}

}  // namespace qwec
