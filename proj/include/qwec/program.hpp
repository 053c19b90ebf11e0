#pragma once

#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qwec/walk.hpp"

namespace qwec {

struct CoinStep {
    CoinSpec spec;
};
struct ShiftStep {};
struct NeighborStep {};
struct LocalCoinStep {
    Particle particle;
    Mat2 unitary;
};
struct MeasureCoinStep {
    Particle particle;
    std::string tag;
};
struct ResetAncillaStep {
    Particle particle;
};
struct InjectionPointStep {
    std::string tag;
};

using WalkStep = std::variant<CoinStep, ShiftStep, NeighborStep, LocalCoinStep, MeasureCoinStep,
                              ResetAncillaStep, InjectionPointStep>;

// The syndrome steps leave the data particles advanced by two clockwise steps
// on their coin-1 branch; programs are compiled for the frame they start in.
enum class DataFrame { unshifted, shifted };
constexpr DataFrame flipped(DataFrame f) {
    return f == DataFrame::unshifted ? DataFrame::shifted : DataFrame::unshifted;
}

struct WalkProgram {
    std::string name;
    std::vector<WalkStep> steps;
    bool requires_external = false;
    // particles asserted at vertex 00 whenever one of them is measured
    std::vector<Particle> returns_to_origin;

    WalkProgram& append(const WalkProgram& other);
    WalkProgram& add(WalkStep step);
    int iteration_count() const;  // number of Shift steps
    bool has_measurements() const;
    std::string listing() const;
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StabilizerPair { s0_s2, s1_s3, s4_s5 };
enum class LogicalClifford { H, S, Z };

WalkProgram build_syndrome_step(StabilizerPair pair, DataFrame frame = DataFrame::unshifted);
WalkProgram build_basis_transform(std::span<const Particle> targets,
                                  DataFrame frame = DataFrame::unshifted);
WalkProgram build_full_cycle(int parity);
WalkProgram build_cnot_middle_block();
WalkProgram build_cnot_coin_to_logical(DataFrame frame = DataFrame::unshifted);
WalkProgram build_cphase(DataFrame frame = DataFrame::unshifted);
WalkProgram build_gauge_zz_measurement();
WalkProgram build_gauge_xx_measurement(DataFrame frame = DataFrame::unshifted);
WalkProgram build_logical_clifford(LogicalClifford gate);

// Data frame a cycle of the given parity starts in.
constexpr DataFrame cycle_entry_frame(int parity) {
    return parity % 2 == 0 ? DataFrame::unshifted : DataFrame::shifted;
}

// ---- execution ----

struct MeasurementRecord {
    std::string tag;
    Particle particle;
    int bit;
};

struct Branch {
    StateVector state;
    double probability = 1.0;
    std::vector<MeasurementRecord> records;

    int bit(std::string_view tag) const;
};

using InjectionHook = std::function<void(std::string_view tag, StateVector& state)>;

// Runs a measurement-free program; throws if the program measures.
void run_unitary(const WalkProgram& program, StateVector& state);
Branch run_sampled(const WalkProgram& program, StateVector state, std::mt19937_64& rng,
                   const InjectionHook& hook = {});
Branch run_forced(const WalkProgram& program, StateVector state, std::span<const int> outcomes,
                  const InjectionHook& hook = {});
// Every measurement branch with probability above 1e-12.
std::vector<Branch> run_branches(const WalkProgram& program, StateVector state,
                                 const InjectionHook& hook = {});

}  // namespace qwec
