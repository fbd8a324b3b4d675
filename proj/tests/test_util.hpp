#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qss/gates.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"

namespace test_util {

using qss::cplx;

inline double gauss(qss::Rng& rng) {
    double u = rng.next_double(), v = rng.next_double();
    if (u < 1e-300) u = 1e-300;
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

inline std::vector<cplx> ginibre(std::size_t len, qss::Rng& rng) {
    std::vector<cplx> v(len);
    for (auto& a : v) a = {gauss(rng), gauss(rng)};
    return v;
}

inline qss::PureState random_state(int n_qubits, qss::Rng& rng) {
    auto amps = ginibre(std::size_t{1} << n_qubits, rng);
    double norm = 0.0;
    for (const auto& a : amps) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return qss::make_state(n_qubits, std::move(amps));
}

// Gram-Schmidt on Ginibre columns.
template <typename MatT, std::size_t D>
inline MatT random_unitary(qss::Rng& rng) {
    MatT u{};
    for (std::size_t col = 0; col < D; ++col) {
        std::vector<cplx> v = ginibre(D, rng);
        for (std::size_t prev = 0; prev < col; ++prev) {
            cplx ip = 0.0;
            for (std::size_t r = 0; r < D; ++r) ip += std::conj(u[r * D + prev]) * v[r];
            for (std::size_t r = 0; r < D; ++r) v[r] -= ip * u[r * D + prev];
        }
        double norm = 0.0;
        for (const auto& a : v) norm += std::norm(a);
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < D; ++r) u[r * D + col] = v[r] / norm;
    }
    return u;
}

inline qss::Mat2 random_unitary2(qss::Rng& rng) { return random_unitary<qss::Mat2, 2>(rng); }
inline qss::Mat4 random_unitary4(qss::Rng& rng) { return random_unitary<qss::Mat4, 4>(rng); }

// Product state across the bipartition given by subset_mask (bit q set means
// qubit q belongs to the first factor). Both factors are Haar-ish random.
inline qss::PureState random_cut_state(int n_qubits, std::uint32_t subset_mask, qss::Rng& rng) {
    std::vector<int> in, out;
    for (int q = 0; q < n_qubits; ++q)
        ((subset_mask >> q) & 1u ? in : out).push_back(q);
    qss::PureState a = random_state(static_cast<int>(in.size()), rng);
    qss::PureState b = random_state(static_cast<int>(out.size()), rng);
    std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cplx> amps(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t ia = 0, ib = 0;
        for (int q : in) ia = (ia << 1) | ((i >> (n_qubits - 1 - q)) & 1u);
        for (int q : out) ib = (ib << 1) | ((i >> (n_qubits - 1 - q)) & 1u);
        amps[i] = a.amps[ia] * b.amps[ib];
    }
    return qss::make_state(n_qubits, std::move(amps));
}

// Random mixture of product states over random nontrivial cuts. Every state
// of this form is biseparable, so a valid witness never goes positive on it.
inline qss::Ensemble random_biseparable_ensemble(int n_qubits, int components, qss::Rng& rng) {
    std::vector<std::pair<double, qss::PureState>> members;
    members.reserve(components);
    std::uint32_t full = (1u << n_qubits) - 1u;
    double total = 0.0;
    for (int k = 0; k < components; ++k) {
        std::uint32_t cut = 1u + rng.uniform_int(full - 1u);  // nonempty, proper
        double w = rng.next_double() + 1e-3;
        total += w;
        members.emplace_back(w, random_cut_state(n_qubits, cut, rng));
    }
    for (auto& [w, s] : members) w /= total;
    return qss::make_ensemble(std::move(members));
}

}  // namespace test_util
