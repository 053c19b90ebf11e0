#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwec/codec.hpp"

namespace qwec::experiments {

struct Config {
    std::string command;
    std::uint64_t seed = 42;
    int trials = 200;
    std::vector<ErrorFamily> families{ErrorFamily::coin, ErrorFamily::shift, ErrorFamily::pauli};
    std::vector<Particle> targets{kDataParticles.begin(), kDataParticles.end()};
    std::string out;
    std::optional<double> tolerance;
    bool monte_carlo = false;
    std::vector<std::string> words;  // logical-gates only; empty means the default list
    int corrupt_generator = -1;      // verify-tables test mode: flips one letter of s_k
    int threads = 0;                 // 0 means hardware concurrency
};

struct Report {
    nlohmann::json json;
    std::string csv;  // error-sweep only
    bool pass = false;
    double max_deviation = 0;
};

Report verify_tables(const Config& config);
Report error_sweep(const Config& config);
Report verify_identities(const Config& config);
Report logical_gates(const Config& config);
// Dispatches on config.command; throws std::invalid_argument on an unknown command.
Report run(const Config& config);
nlohmann::json config_json(const Config& config);

// ---- building blocks shared with the acceptance suite ----

using Bloch = std::array<double, 3>;

Bloch bloch_of(cplx alpha, cplx beta);
double fidelity(const Bloch& want, const Bloch& got);  // pure target: (1 + want.got) / 2
// Haar-uniform amplitudes.
std::pair<cplx, cplx> random_amplitudes(std::mt19937_64& rng);

// Walk-encoded |0>_L and |1>_L on the nested layout (PEX removed after encoding).
// Encoding is linear in (alpha, beta), so any encoded state is a superposition of the two.
struct EncodedBasis {
    Session zero;
    Session one;
};
EncodedBasis encoded_basis(const ForcedSigns& signs = {});
EncodedBasis encoded_basis(std::mt19937_64& rng);
Session encoded_state(const EncodedBasis& basis, cplx alpha, cplx beta);

struct TrialOutcome {
    std::vector<Syndrome> syndromes;  // one per branch
    double min_fidelity = 1;
    double mean_fidelity = 1;         // probability weighted
    bool uncorrectable = false;
    std::string fault;                // protocol check that aborted the trial, if any
};
// inject -> one cycle -> update_frame -> readout, over every branch (or one sampled branch).
TrialOutcome correct_after_error(const Session& encoded, const ErrorSpec& error, const Bloch& want,
                                 bool monte_carlo, std::mt19937_64& rng);

struct RowCheck {
    std::string label;
    PauliWord op;
    Syndrome printed;
    Syndrome analytic;
    std::vector<Syndrome> walk;
    bool pass = false;
};
std::vector<RowCheck> table_row_checks(const CodeBasis& basis);

struct IdentityCheck {
    std::string name;
    double deviation = 0;
    double tolerance = 0;
    bool pass = false;
    std::string note;
};
IdentityCheck basis_transform_identity(DataFrame frame);
IdentityCheck cnot_identity();
IdentityCheck cphase_identity();
IdentityCheck middle_block_identity();
IdentityCheck cphase_decomposition_identity();

// Conjugation criteria for the transversal H and S gates.
struct CriterionCheck {
    std::string name;
    PauliWord lhs;
    PauliWord rhs;
    bool exact = false;
    bool modulo_gauge = false;
};
std::vector<CriterionCheck> clifford_criteria();
// True when conjugation by the gate maps every stabilizer generator into the stabilizer group
// (up to sign).
bool preserves_stabilizer_group(TransversalGate gate);

// Gate words are space-separated letters from {H, S, T, Z}, applied left to right.
std::vector<char> parse_word(std::string_view word);
Bloch exact_bloch_after(std::string_view word, cplx alpha, cplx beta);
struct GateRun {
    std::string word;
    Bloch input{};
    Bloch expected{};
    Bloch got{};
    double deviation = 0;
};
GateRun run_gate_word(std::string_view word, cplx alpha, cplx beta, std::uint64_t seed);

}  // namespace qwec::experiments
