#include <bit>

#include "qss/kernels.hpp"

namespace qss::kernels {

namespace serial {

void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g) {
    const std::size_t stride = std::size_t{1} << bitpos;
    const std::size_t dim = a.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const cplx a0 = a[i0];
            const cplx a1 = a[i1];
            a[i0] = g[0] * a0 + g[1] * a1;
            a[i1] = g[2] * a0 + g[3] * a1;
        }
    }
}

// Inserts a zero bit at `pos`, shifting everything at or above it up.
static inline std::size_t insert_zero(std::size_t v, int pos) {
    const std::size_t low = (std::size_t{1} << pos) - 1;
    return ((v & ~low) << 1) | (v & low);
}

void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g) {
    const std::size_t hi = std::size_t{1} << bitpos_hi;
    const std::size_t lo = std::size_t{1} << bitpos_lo;
    const int p_small = bitpos_hi < bitpos_lo ? bitpos_hi : bitpos_lo;
    const int p_big = bitpos_hi < bitpos_lo ? bitpos_lo : bitpos_hi;
    const std::size_t groups = a.size() >> 2;
    for (std::size_t k = 0; k < groups; ++k) {
        const std::size_t base = insert_zero(insert_zero(k, p_small), p_big);
        const std::size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
        cplx in[4];
        for (int t = 0; t < 4; ++t) in[t] = a[idx[t]];
        for (int r = 0; r < 4; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < 4; ++c) acc += g[4 * r + c] * in[c];
            a[idx[r]] = acc;
        }
    }
}

cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m) {
    double re = 0.0, im = 0.0;
    const std::size_t dim = a.size();
    for (std::size_t j = 0; j < dim; ++j) {
        cplx c = std::conj(a[j ^ m.flip]) * a[j];
        if (std::popcount(j & m.phase) & 1) c = -c;
        re += c.real();
        im += c.imag();
    }
    cplx sum{re, im};
    switch (m.y_count & 3) {  // i^y_count
        case 1: sum *= cplx{0.0, 1.0}; break;
        case 2: sum = -sum; break;
        case 3: sum *= cplx{0.0, -1.0}; break;
        default: break;
    }
    return sum;
}

}  // namespace serial

void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g) {
    if (a.size() >= (std::size_t{1} << kParallelCutoffQubits))
        par::apply_1q(a, bitpos, g);
    else
        serial::apply_1q(a, bitpos, g);
}

void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g) {
    if (a.size() >= (std::size_t{1} << kParallelCutoffQubits))
        par::apply_2q(a, bitpos_hi, bitpos_lo, g);
    else
        serial::apply_2q(a, bitpos_hi, bitpos_lo, g);
}

cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m) {
    if (a.size() >= (std::size_t{1} << kParallelCutoffQubits))
        return par::pauli_expectation(a, m);
    return serial::pauli_expectation(a, m);
}

}  // namespace qss::kernels
