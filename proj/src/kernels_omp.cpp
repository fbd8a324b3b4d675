#include <bit>
#include <cstdint>

#include "qss/kernels.hpp"

namespace qss::kernels::par {

static inline std::size_t insert_zero(std::size_t v, int pos) {
    const std::size_t low = (std::size_t{1} << pos) - 1;
    return ((v & ~low) << 1) | (v & low);
}

void apply_1q(std::vector<cplx>& a, int bitpos, const Mat2& g) {
    const std::size_t stride = std::size_t{1} << bitpos;
    const std::int64_t pairs = static_cast<std::int64_t>(a.size() >> 1);
    cplx* p = a.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t i0 = insert_zero(static_cast<std::size_t>(k), bitpos);
        const std::size_t i1 = i0 + stride;
        const cplx a0 = p[i0];
        const cplx a1 = p[i1];
        p[i0] = g[0] * a0 + g[1] * a1;
        p[i1] = g[2] * a0 + g[3] * a1;
    }
}

void apply_2q(std::vector<cplx>& a, int bitpos_hi, int bitpos_lo, const Mat4& g) {
    const std::size_t hi = std::size_t{1} << bitpos_hi;
    const std::size_t lo = std::size_t{1} << bitpos_lo;
    const int p_small = bitpos_hi < bitpos_lo ? bitpos_hi : bitpos_lo;
    const int p_big = bitpos_hi < bitpos_lo ? bitpos_lo : bitpos_hi;
    const std::int64_t groups = static_cast<std::int64_t>(a.size() >> 2);
    cplx* p = a.data();
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < groups; ++k) {
        const std::size_t base = insert_zero(insert_zero(static_cast<std::size_t>(k), p_small), p_big);
        const std::size_t idx[4] = {base, base | lo, base | hi, base | hi | lo};
        cplx in[4];
        for (int t = 0; t < 4; ++t) in[t] = p[idx[t]];
        for (int r = 0; r < 4; ++r) {
            cplx acc{0.0, 0.0};
            for (int c = 0; c < 4; ++c) acc += g[4 * r + c] * in[c];
            p[idx[r]] = acc;
        }
    }
}

cplx pauli_expectation(const std::vector<cplx>& a, const PauliMasks& m) {
    double re = 0.0, im = 0.0;
    const std::int64_t dim = static_cast<std::int64_t>(a.size());
    const cplx* p = a.data();
#pragma omp parallel for schedule(static) reduction(+ : re, im)
    for (std::int64_t j = 0; j < dim; ++j) {
        const std::size_t u = static_cast<std::size_t>(j);
        cplx c = std::conj(p[u ^ m.flip]) * p[u];
        if (std::popcount(u & m.phase) & 1) c = -c;
        re += c.real();
        im += c.imag();
    }
    cplx sum{re, im};
    switch (m.y_count & 3) {
        case 1: sum *= cplx{0.0, 1.0}; break;
        case 2: sum = -sum; break;
        case 3: sum *= cplx{0.0, -1.0}; break;
        default: break;
    }
    return sum;
}

}  // namespace qss::kernels::par
