#pragma once

#include "qss/kernels.hpp"
#include "qss/state.hpp"

namespace qss {

namespace gate {
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline const Mat2 kIdentity{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
inline const Mat2 kHadamard{cplx{kInvSqrt2, 0}, cplx{kInvSqrt2, 0},
                            cplx{kInvSqrt2, 0}, cplx{-kInvSqrt2, 0}};
inline const Mat2 kPauliX{cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}};
inline const Mat2 kPauliY{cplx{0, 0}, cplx{0, -1}, cplx{0, 1}, cplx{0, 0}};
inline const Mat2 kPauliZ{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}};
// First qubit argument is the control, second the target.
inline const Mat4 kCnot{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0},
                        cplx{0, 0}, cplx{1, 0}, cplx{0, 0}, cplx{0, 0},
                        cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0},
                        cplx{0, 0}, cplx{0, 0}, cplx{1, 0}, cplx{0, 0}};
}  // namespace gate

bool is_unitary(const Mat2& g, double tol = kNormTol);
bool is_unitary(const Mat4& g, double tol = kNormTol);

// Applies a single-qubit gate; validates unitarity and the target index.
PureState apply_gate(const PureState& s, const Mat2& g, int qubit);
void apply_gate_inplace(PureState& s, const Mat2& g, int qubit);

// Applies a two-qubit gate. q_first indexes the more significant bit of the
// gate's 4-dim basis, so apply_gate(s, kCnot, control, target).
PureState apply_gate(const PureState& s, const Mat4& g, int q_first, int q_second);
void apply_gate_inplace(PureState& s, const Mat4& g, int q_first, int q_second);

}  // namespace qss
