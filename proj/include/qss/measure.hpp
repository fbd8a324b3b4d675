#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qss/state.hpp"

namespace qss {

enum class Basis : unsigned char { X, Y, Z };

char basis_char(Basis b);
Basis basis_from_char(char c);

// Measurement outcome. bit 0 is the +1 eigenvalue (|x+>, |y+>, |0>),
// bit 1 the -1 eigenvalue, so sign == 1 - 2*bit.
struct Outcome {
    int bit = 0;
    int sign() const { return 1 - 2 * bit; }
};

// Eigenvector of `basis` with eigenvalue +1 (bit 0) or -1 (bit 1):
// x: (|0> +- |1>)/sqrt2, y: (|0> +- i|1>)/sqrt2, z: |0> / |1>.
std::array<cplx, 2> basis_ket(Basis basis, int bit);

// Probability that measuring `qubit` in `basis` yields bit 0.
double prob_bit0(const PureState& s, int qubit, Basis basis);

// Projective measurement. Outcome bit is 0 exactly when randomness < prob_bit0;
// the returned state is collapsed and renormalized. `randomness` must come
// from the caller's seeded stream.
std::pair<Outcome, PureState> measure(const PureState& s, int qubit, Basis basis,
                                      double randomness);
Outcome measure_inplace(PureState& s, int qubit, Basis basis, double randomness);

// Projects `qubit` onto the (basis, bit) eigenstate without removing it.
// Returns the branch probability and the renormalized state, or nullopt when
// the branch has zero weight.
std::optional<std::pair<double, PureState>> project_qubit(const PureState& s, int qubit,
                                                          Basis basis, int bit);

struct QubitAssignment {
    int qubit;
    Basis basis;
    int bit;
};

// Contracts the assigned qubits against their eigenstates and removes them,
// leaving the residual state on the remaining qubits (relative order kept).
// Returns the joint branch probability with the renormalized residual.
std::optional<std::pair<double, PureState>> collapse_remove(
    const PureState& s, std::vector<QubitAssignment> assignments);

// Completes a pairwise-orthogonal list of k-qubit states to a full orthonormal
// basis of their space. The first states.size() vectors are the inputs
// themselves; the rest come from Gram-Schmidt over canonical vectors.
// Throws NonOrthogonalError if any pair overlaps beyond tolerance.
std::vector<std::vector<cplx>> discriminating_basis(const std::vector<PureState>& states);

// Joint projective measurement of `qubits` (ascending indices) in an arbitrary
// orthonormal basis of their subspace. Basis vector index bit j (most
// significant first) corresponds to qubits[j]. Returns the selected basis
// index and collapses the full state.
std::pair<int, PureState> measure_in_basis(const PureState& s, const std::vector<int>& qubits,
                                           const std::vector<std::vector<cplx>>& basis,
                                           double randomness);
int measure_in_basis_inplace(PureState& s, const std::vector<int>& qubits,
                             const std::vector<std::vector<cplx>>& basis, double randomness);

}  // namespace qss
