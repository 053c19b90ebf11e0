#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qwec/error_model.hpp"
#include "qwec/program.hpp"

namespace qwec {

using Signs = std::array<int, 6>;  // eigenvalues of s0..s5, each +1 or -1

struct CycleRecord {
    Signs eigenvalues{};
    Syndrome m;
    int parity = 0;
    Signs after_correction{};  // eigenvalues once any physical correction is applied
};

struct SyndromeHistory {
    Signs reference{1, 1, 1, 1, 1, 1};
    std::vector<CycleRecord> cycles;

    int next_parity() const { return static_cast<int>(cycles.size() % 2); }
    const Signs& latest() const { return cycles.empty() ? reference : cycles.back().after_correction; }
    void append(const Signs& eigenvalues);
};

struct PauliFrame {
    PauliWord correction;
    std::vector<Syndrome> log;
    bool uncorrectable = false;
};

struct LogicalReadout {
    std::array<double, 3> bloch{};  // frame-adjusted (X, Y, Z)
    std::array<double, 3> raw{};    // before applying the frame
};

// State plus the classical record of one logical qubit.
struct Session {
    StateVector state;
    SyndromeHistory history;
    PauliFrame frame;
    DataFrame data_frame = DataFrame::unshifted;
    std::vector<ErrorSpec> injected;
};

// Forced preparation signs: s0..s5 then Zbar.
struct ForcedSigns {
    Signs stabilizers{1, 1, 1, 1, 1, 1};
    int logical_z = 1;
};

Session prepare_logical_zero(Layout layout, const ForcedSigns& signs = {});
Session prepare_logical_zero(Layout layout, std::mt19937_64& rng);

// Loads alpha|0> + beta|1> into the PEX coin, runs the coin-to-logical CNOT,
// H on PEX, measures PEX and applies Zbar on outcome 1. PEX is reset to coin 0.
void encode(Session& s, cplx alpha, cplx beta, std::mt19937_64& rng);
void encode_forced(Session& s, cplx alpha, cplx beta, int pex_outcome);
std::vector<std::pair<Session, double>> encode_branches(const Session& s, cplx alpha, cplx beta);

void run_cycle(Session& s, std::mt19937_64& rng, const InjectionHook& hook = {});
std::vector<std::pair<Session, double>> run_cycle_branches(const Session& s, const InjectionHook& hook = {});

// frame <- frame * decode(m of the latest cycle)
void update_frame(const SyndromeHistory& history, PauliFrame& frame);
// Applies the frame correction to the state and clears it; the next cycle
// compares against the corrected eigenvalues.
void apply_frame(Session& s);

LogicalReadout logical_readout(const StateVector& state, const PauliFrame& frame, DataFrame data_frame);
LogicalReadout logical_readout(const Session& s);
// Expresses a logical-frame operator on the physical data frame.
PauliWord in_data_frame(const PauliWord& w, DataFrame data_frame);
// Undoes the two-step shift so the data sit in the unshifted frame.
void restore_unshifted(Session& s);

struct GaugeMeasurement {
    int sign;   // the reported g eigenvalue
    int zz;     // product of the two outcomes of the ZZ program
    int xx;     // product of the two outcomes of the XX program
    int s4;
};
GaugeMeasurement measure_g(Session& s, std::mt19937_64& rng);

void logical_T(Session& s, std::mt19937_64& rng);
void apply_logical_clifford(Session& s, LogicalClifford gate);

std::string transcript_json(const Session& s, const LogicalReadout& readout);

}  // namespace qwec
