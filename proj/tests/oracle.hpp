#pragma once

// Dense-matrix reference implementation for cross-checking the kernels.
// Builds full 2^n x 2^n operators, so keep n small.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qss/gates.hpp"
#include "qss/state.hpp"

namespace oracle {

using qss::cplx;
using Mat = std::vector<std::vector<cplx>>;

inline Mat identity(std::size_t d) {
    Mat m(d, std::vector<cplx>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    std::size_t da = a.size(), db = b.size();
    Mat m(da * db, std::vector<cplx>(da * db, 0.0));
    for (std::size_t ia = 0; ia < da; ++ia)
        for (std::size_t ja = 0; ja < da; ++ja)
            for (std::size_t ib = 0; ib < db; ++ib)
                for (std::size_t jb = 0; jb < db; ++jb)
                    m[ia * db + ib][ja * db + jb] = a[ia][ja] * b[ib][jb];
    return m;
}

inline Mat pauli_matrix(char c) {
    const cplx i(0.0, 1.0);
    switch (c) {
        case 'x': return {{0.0, 1.0}, {1.0, 0.0}};
        case 'y': return {{0.0, -i}, {i, 0.0}};
        case 'z': return {{1.0, 0.0}, {0.0, -1.0}};
        default: return identity(2);
    }
}

// Leftmost character acts on qubit 0 (the most significant index bit).
inline Mat string_matrix(const std::string& s) {
    Mat m = pauli_matrix(s.empty() ? '1' : s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) m = kron(m, pauli_matrix(s[k]));
    return m;
}

inline std::vector<cplx> apply(const Mat& m, const std::vector<cplx>& v) {
    std::vector<cplx> out(v.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) out[i] += m[i][j] * v[j];
    return out;
}

inline cplx expectation(const Mat& m, const std::vector<cplx>& v) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < m.size(); ++j) row += m[i][j] * v[j];
        acc += std::conj(v[i]) * row;
    }
    return acc;
}

inline Mat embed_1q(int n, int qubit, const qss::Mat2& g) {
    Mat gm = {{g[0], g[1]}, {g[2], g[3]}};
    Mat m = qubit == 0 ? gm : identity(2);
    for (int q = 1; q < n; ++q) m = kron(m, q == qubit ? gm : identity(2));
    return m;
}

// Gate index is (bit of q_first << 1) | bit of q_second; qubits need not be adjacent.
inline Mat embed_2q(int n, int q_first, int q_second, const qss::Mat4& g) {
    std::size_t dim = std::size_t{1} << n;
    int p1 = n - 1 - q_first, p2 = n - 1 - q_second;
    std::uint64_t mask = (std::uint64_t{1} << p1) | (std::uint64_t{1} << p2);
    Mat m(dim, std::vector<cplx>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        int gi = static_cast<int>(((i >> p1) & 1) << 1 | ((i >> p2) & 1));
        for (std::size_t j = 0; j < dim; ++j) {
            if ((i & ~mask) != (j & ~mask)) continue;
            int gj = static_cast<int>(((j >> p1) & 1) << 1 | ((j >> p2) & 1));
            m[i][j] = g[gi * 4 + gj];
        }
    }
    return m;
}

}  // namespace oracle
