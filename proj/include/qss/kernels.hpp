#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace qss {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;    // row major
using Mat4 = std::array<cplx, 16>;   // row major

namespace kernels {

// States of up to this many qubits always take the serial path. Keeps tiny
// protocol states away from OpenMP overhead and makes their arithmetic
// independent of the thread count.
inline constexpr int kParallelCutoffQubits = 14;

// Masks describing a Pauli string over amplitude bit positions:
//   flip  = positions carrying X or Y (basis-state index gets XORed),
//   phase = positions carrying Y or Z (each set bit contributes -1),
//   y_count = number of Y letters (global factor i^y_count).
struct PauliMasks {
    std::uint64_t flip = 0;
    std::uint64_t phase = 0;
    int y_count = 0;
};

namespace serial {
void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g);
void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g);
cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m);
}  // namespace serial

// OpenMP variants; bitwise-identical gate output, reduction order may differ
// in pauli_expectation by a few ulp. Compiled to the serial code when OpenMP
// is unavailable.
namespace par {
void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g);
void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g);
cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m);
}  // namespace par

// Size-dispatched entry points used by the rest of the library.
void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g);
void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g);
cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m);

}  // namespace kernels
}  // namespace qss
