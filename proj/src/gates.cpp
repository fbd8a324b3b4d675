#include "qss/gates.hpp"

#include <cmath>
#include <stdexcept>

#include "qss/errors.hpp"

namespace qss {

bool is_unitary(const Mat2& g, double tol) {
    // U U^dagger == I
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < 2; ++k) acc += g[2 * r + k] * std::conj(g[2 * c + k]);
            const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

bool is_unitary(const Mat4& g, double tol) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            cplx acc{0.0, 0.0};
            for (int k = 0; k < 4; ++k) acc += g[4 * r + k] * std::conj(g[4 * c + k]);
            const cplx want = (r == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            if (std::abs(acc - want) > tol) return false;
        }
    }
    return true;
}

static void check_qubit(const PureState& s, int q) {
    if (q < 0 || q >= s.n_qubits) throw std::invalid_argument("qubit index out of range");
}

void apply_gate_inplace(PureState& s, const Mat2& g, int qubit) {
    check_qubit(s, qubit);
    if (!is_unitary(g)) throw ValidationError("gate matrix is not unitary");
    kernels::apply_1q(s.amps, s.bitpos(qubit), g);
}

PureState apply_gate(const PureState& s, const Mat2& g, int qubit) {
    PureState out = s;
    apply_gate_inplace(out, g, qubit);
    return out;
}

void apply_gate_inplace(PureState& s, const Mat4& g, int q_first, int q_second) {
    check_qubit(s, q_first);
    check_qubit(s, q_second);
    if (q_first == q_second) throw std::invalid_argument("two-qubit gate targets must differ");
    if (!is_unitary(g)) throw ValidationError("gate matrix is not unitary");
    kernels::apply_2q(s.amps, s.bitpos(q_first), s.bitpos(q_second), g);
}

PureState apply_gate(const PureState& s, const Mat4& g, int q_first, int q_second) {
    PureState out = s;
    apply_gate_inplace(out, g, q_first, q_second);
    return out;
}

}  // namespace qss
