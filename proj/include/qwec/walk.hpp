#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwec/pauli.hpp"

namespace qwec {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat8 = Eigen::Matrix<cplx, 8, 8>;

inline constexpr double kUnitaryTol = 1e-12;

// Value is the 2-bit position code 2x + y.
enum class Vertex : std::uint8_t { v00 = 0, v01 = 1, v10 = 2, v11 = 3 };
inline constexpr std::array<Vertex, 4> kClockwise{Vertex::v00, Vertex::v10, Vertex::v11, Vertex::v01};

constexpr int code(Vertex v) { return static_cast<int>(v); }
constexpr int x_bit(Vertex v) { return (code(v) >> 1) & 1; }
constexpr int y_bit(Vertex v) { return code(v) & 1; }
Vertex next_clockwise(Vertex v);
const char* vertex_label(Vertex v);  // "xy"
Vertex parse_vertex(std::string_view label);

namespace coins {
Mat2 I();
Mat2 X();
Mat2 Y();
Mat2 Z();
Mat2 H();
Mat2 H_prime();  // (X - Z)/sqrt2
Mat2 S();        // exp(-i pi/4 Z)
Mat2 ZS();       // Z * S
Mat2 T();        // exp(-i pi/8 Z), relative phase e^{i pi/4} on |1>
Mat2 phase_rotation(double theta);  // exp(-i theta/2 Z)
}  // namespace coins

bool is_unitary(const Mat2& u, double tol = kUnitaryTol);
bool is_unitary(const Mat8& u, double tol = kUnitaryTol);

// Five nested particles P0..P4 and optionally the external particle.
struct Layout {
    bool external = false;

    static Layout nested() { return {false}; }
    static Layout with_external() { return {true}; }

    int particle_count() const { return external ? 6 : 5; }
    bool has(Particle p) const { return p != Particle::PEX || external; }
    std::size_t dimension() const { return std::size_t{1} << (3 * particle_count()); }
    friend bool operator==(Layout, Layout) = default;
};

// Vertex-conditioned coin unitaries, identity where unset.
class CoinSpec {
public:
    CoinSpec& set(Particle p, Vertex v, const Mat2& u);
    CoinSpec& set_all(Particle p, const Mat2& u);
    CoinSpec& set(Particle p, std::initializer_list<Vertex> vs, const Mat2& u);

    const std::optional<Mat2>& at(Particle p, Vertex v) const { return table_[slot(p)][code(v)]; }
    bool touches(Particle p) const;
    bool empty() const;

private:
    std::array<std::array<std::optional<Mat2>, 4>, kParticleSlots> table_{};
};

struct Placement {
    Particle particle;
    int coin;
    Vertex vertex;
};

class StateVector {
public:
    explicit StateVector(Layout layout);

    Layout layout() const { return layout_; }
    std::size_t dimension() const { return amp_.size(); }
    std::span<cplx> amplitudes() { return amp_; }
    std::span<const cplx> amplitudes() const { return amp_; }
    cplx& operator[](std::size_t i) { return amp_[i]; }
    const cplx& operator[](std::size_t i) const { return amp_[i]; }

    double norm() const;
    void normalize();

    // 3-bit (c, x, y) digit of particle p in basis index i
    static int digit(std::size_t i, Particle p) { return static_cast<int>((i >> (3 * slot(p))) & 7u); }

private:
    Layout layout_;
    std::vector<cplx> amp_;
};

StateVector init_state(Layout layout, std::span<const Placement> placements);
// Every particle at coin 0, vertex 00.
StateVector ground_state(Layout layout);

void apply_coin(StateVector& state, const CoinSpec& spec);
void apply_shift(StateVector& state);
void apply_neighbor(StateVector& state);
void apply_particle_unitary(StateVector& state, Particle p, const Mat8& u);
void apply_local_coin(StateVector& state, Particle p, const Mat2& u);
void apply_pauli(StateVector& state, const PauliWord& w);

double coin_one_probability(const StateVector& state, Particle p);
std::array<double, 4> vertex_marginal(const StateVector& state, Particle p);

struct CoinMeasurement {
    int bit;
    double probability;
};
// Projects the coin of p onto |bit>, renormalizes and returns the pre-projection probability.
CoinMeasurement collapse_coin(StateVector& state, Particle p, int bit);
CoinMeasurement measure_coin(StateVector& state, Particle p, std::mt19937_64& rng);
struct CoinBranch {
    StateVector state;
    double probability;
};
// Both post-measurement states; an entry is empty when its probability is below 1e-12.
std::array<std::optional<CoinBranch>, 2> measure_coin_both(const StateVector& state, Particle p);

double expectation(const StateVector& state, const PauliWord& w);
double fidelity(const StateVector& a, const StateVector& b);
cplx inner(const StateVector& a, const StateVector& b);
double max_deviation(const StateVector& a, const StateVector& b);
std::pair<StateVector, double> project_pauli(const StateVector& state, const PauliWord& w, int sign);

// Removes the external particle, which must sit in the given basis digit.
StateVector drop_external(const StateVector& state, int digit = 0);
StateVector add_external(const StateVector& state, int digit = 0);

}  // namespace qwec
