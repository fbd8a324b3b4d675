#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace qss {

using cplx = std::complex<double>;

inline constexpr int kDefaultQubitCap = 20;
inline constexpr double kNormTol = 1e-9;

// Pure n-qubit state as a dense amplitude vector of length 2^n.
// Qubit 0 is the most significant bit of the index, so for three qubits
// index 0b000 is |000> and kets read left to right.
struct PureState {
    int n_qubits = 0;
    std::vector<cplx> amps;

    std::size_t dim() const { return amps.size(); }
    double norm_sq() const;

    // Value of `qubit` in basis state `index`.
    int bit(std::size_t index, int qubit) const {
        return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
    }
    // Bit position of `qubit` inside an amplitude index.
    int bitpos(int qubit) const { return n_qubits - 1 - qubit; }
};

// All-zeros computational basis state |0...0>.
PureState zero_state(int n_qubits, int cap = kDefaultQubitCap);

// (|0...0> + e^{i phase}|1...1>)/sqrt(2).
PureState ghz_state(int n_qubits, double phase, int cap = kDefaultQubitCap);

// Validates length = 2^n and unit norm within kNormTol.
PureState make_state(int n_qubits, std::vector<cplx> amps, int cap = kDefaultQubitCap);

// Appends `count` fresh qubits in |0> after the existing ones.
PureState append_ancillas(const PureState& s, int count, int cap = kDefaultQubitCap);

// Convex mixture of pure states used wherever the simulator needs mixed-state
// statistics. Density matrices are never materialized.
struct Ensemble {
    std::vector<std::pair<double, PureState>> members;
};

// Validates non-negative weights summing to 1 within kNormTol and equal qubit counts.
Ensemble make_ensemble(std::vector<std::pair<double, PureState>> members);

}  // namespace qss
