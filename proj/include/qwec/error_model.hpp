#pragma once

#include <array>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include "qwec/walk.hpp"

namespace qwec {

// Vertex-conditioned coin error, one 2x2 block per vertex code (2x + y).
struct CoinError {
    std::array<Mat2, 4> blocks{Mat2::Identity(), Mat2::Identity(), Mat2::Identity(), Mat2::Identity()};
};

// Per coin value j: alpha_j I + beta_j R + gamma_j R^T on the position.
struct ShiftError {
    std::array<cplx, 2> alpha{1.0, 1.0};
    std::array<cplx, 2> beta{};
    std::array<cplx, 2> gamma{};
};

struct PauliFlip {
    PauliWord word;  // letters on the target particle only
};

enum class ErrorFamily { coin, shift, pauli };
std::string_view family_name(ErrorFamily f);
ErrorFamily parse_family(std::string_view name);

struct ErrorSpec {
    std::variant<CoinError, ShiftError, PauliFlip> model;
    Particle target = Particle::P0;

    ErrorFamily family() const { return static_cast<ErrorFamily>(model.index()); }
};

class InvalidError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// 8x8 position operators in the per-particle basis b = 4c + 2x + y.
Mat8 rotation_dense();  // R on both coin blocks
Mat2 pauli_letter(char l);
Mat8 dense_on_particle(const PauliWord& w, Particle p);

// Throws InvalidError naming the offending block.
void validate(const ErrorSpec& spec);
Mat8 realize(const ErrorSpec& spec);
ErrorSpec sample_random_error(std::mt19937_64& rng, ErrorFamily family, Particle target);
void inject(StateVector& state, const ErrorSpec& spec);

}  // namespace qwec
