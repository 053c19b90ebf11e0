#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwec/program.hpp"

namespace qwec::oracle {

using Dense = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct DenseOperator {
    enum class Kind { unitary, hermitian };
    Dense matrix;
    Kind kind = Kind::unitary;

    Eigen::Index dimension() const { return matrix.rows(); }
    bool satisfies_tag(double tol = 1e-12) const;
};

// Least-significant qubit first.
using QubitOrdering = std::vector<QubitId>;
// P0.y, P0.x, P0.c, P2.y, ... : matches the state-vector packing of the data digits.
QubitOrdering data_ordering();
QubitOrdering particle_ordering(Particle p);

DenseOperator dense_of(const PauliWord& w, const QubitOrdering& ordering);

// Walk steps as dense matrices on one particle (8) or a nested pair (64, lower slot least significant).
Dense coin_dense(const CoinSpec& spec, Particle p);
Dense shift_dense();
Dense nested_neighbor_dense();
Dense external_neighbor_dense();  // P4 least significant, PEX most significant

// Applies a dense operator to the listed particles of a full state (first listed = least significant).
void apply_dense(StateVector& state, std::span<const Particle> particles, const Dense& op);
// Reference evolution of a whole program step by step through dense local factors.
void apply_step_dense(StateVector& state, const WalkStep& step);

struct CodespaceBasis {
    // 8 vectors on the 512-dim data space, index = 4*z + 2*g1 + g0 with bit 1 meaning eigenvalue -1
    // of (Zbar, g1Z, g0Z).
    std::array<Vec, 8> vectors;
    // logical |0>, |1> (|1> := Xbar|0>) for the gauge configuration g0Z = g1Z = +1
    std::array<Vec, 2> logical_pair(int gauge_config = 0) const;
};
// Projector rank of the s0..s5 simultaneous eigenspace for the given signs.
int eigenspace_dimension(const std::array<int, 6>& signs);
CodespaceBasis codespace_basis(const std::array<int, 6>& signs);

// Places a 512-dim data vector into a full state with ancillas (and PEX) at coin 0, vertex 00,
// optionally with the PEX coin set to the given amplitudes.
StateVector embed_data(const Vec& data, Layout layout, std::array<cplx, 2> pex_coin = {1.0, 0.0});
Vec data_part(const StateVector& state);  // inverse of embed_data for the all-parked case

Dense extract_unitary(const WalkProgram& program, std::span<const StateVector> inputs,
                      std::span<const StateVector> outputs);

double max_abs(const Dense& m);

}  // namespace qwec::oracle
