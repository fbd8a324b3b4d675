#include "qss/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "qss/errors.hpp"

namespace qss {

namespace {

constexpr double kZeroBranchTol = 1e-30;

void check_qubit(const PureState& s, int qubit) {
    if (qubit < 0 || qubit >= s.n_qubits)
        throw std::invalid_argument("qubit index " + std::to_string(qubit) +
                                    " out of range for " + std::to_string(s.n_qubits) +
                                    " qubits");
}

// Index with bit `b` inserted at bit position `pos`.
std::uint64_t insert_bit(std::uint64_t v, int pos, std::uint64_t b) {
    const std::uint64_t low = (std::uint64_t{1} << pos) - 1;
    return ((v & ~low) << 1) | (b << pos) | (v & low);
}

}  // namespace

char basis_char(Basis b) {
    switch (b) {
        case Basis::X: return 'x';
        case Basis::Y: return 'y';
        default: return 'z';
    }
}

Basis basis_from_char(char c) {
    switch (c) {
        case 'x': case 'X': return Basis::X;
        case 'y': case 'Y': return Basis::Y;
        case 'z': case 'Z': return Basis::Z;
        default: throw ValidationError(std::string("unknown basis character '") + c + "'");
    }
}

std::array<cplx, 2> basis_ket(Basis basis, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("outcome bit must be 0 or 1");
    const double r = 1.0 / std::sqrt(2.0);
    const double sgn = bit == 0 ? 1.0 : -1.0;
    switch (basis) {
        case Basis::X: return {cplx{r, 0.0}, cplx{sgn * r, 0.0}};
        case Basis::Y: return {cplx{r, 0.0}, cplx{0.0, sgn * r}};
        default:
            if (bit == 0) return {cplx{1.0, 0.0}, cplx{0.0, 0.0}};
            return {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    }
}

double prob_bit0(const PureState& s, int qubit, Basis basis) {
    check_qubit(s, qubit);
    const auto k = basis_ket(basis, 0);
    const int pos = s.bitpos(qubit);
    const std::uint64_t half = s.dim() >> 1;
    double p0 = 0.0;
    for (std::uint64_t r = 0; r < half; ++r) {
        const std::uint64_t i0 = insert_bit(r, pos, 0);
        const cplx ov = std::conj(k[0]) * s.amps[i0] +
                        std::conj(k[1]) * s.amps[i0 | (std::uint64_t{1} << pos)];
        p0 += std::norm(ov);
    }
    return p0;
}

std::optional<std::pair<double, PureState>> project_qubit(const PureState& s, int qubit,
                                                          Basis basis, int bit) {
    check_qubit(s, qubit);
    const auto k = basis_ket(basis, bit);
    const int pos = s.bitpos(qubit);
    const std::uint64_t half = s.dim() >> 1;
    PureState out;
    out.n_qubits = s.n_qubits;
    out.amps.assign(s.dim(), cplx{0.0, 0.0});
    double prob = 0.0;
    for (std::uint64_t r = 0; r < half; ++r) {
        const std::uint64_t i0 = insert_bit(r, pos, 0);
        const std::uint64_t i1 = i0 | (std::uint64_t{1} << pos);
        const cplx ov = std::conj(k[0]) * s.amps[i0] + std::conj(k[1]) * s.amps[i1];
        prob += std::norm(ov);
        out.amps[i0] = k[0] * ov;
        out.amps[i1] = k[1] * ov;
    }
    if (prob < kZeroBranchTol) return std::nullopt;
    const double inv = 1.0 / std::sqrt(prob);
    for (auto& a : out.amps) a *= inv;
    return std::make_pair(prob, std::move(out));
}

std::pair<Outcome, PureState> measure(const PureState& s, int qubit, Basis basis,
                                      double randomness) {
    const double p0 = prob_bit0(s, qubit, basis);
    int bit = randomness < p0 ? 0 : 1;
    auto branch = project_qubit(s, qubit, basis, bit);
    if (!branch) {
        // Chosen branch is numerically empty; the complement carries all weight.
        bit ^= 1;
        branch = project_qubit(s, qubit, basis, bit);
        if (!branch) throw ValidationError("measurement on zero-norm state");
    }
    return {Outcome{bit}, std::move(branch->second)};
}

Outcome measure_inplace(PureState& s, int qubit, Basis basis, double randomness) {
    auto [out, post] = measure(s, qubit, basis, randomness);
    s = std::move(post);
    return out;
}

std::optional<std::pair<double, PureState>> collapse_remove(
    const PureState& s, std::vector<QubitAssignment> assignments) {
    for (const auto& a : assignments) {
        check_qubit(s, a.qubit);
        if (a.bit != 0 && a.bit != 1) throw std::invalid_argument("outcome bit must be 0 or 1");
    }
    std::sort(assignments.begin(), assignments.end(),
              [](const QubitAssignment& a, const QubitAssignment& b) { return a.qubit > b.qubit; });
    for (std::size_t i = 1; i < assignments.size(); ++i)
        if (assignments[i].qubit == assignments[i - 1].qubit)
            throw std::invalid_argument("duplicate qubit in collapse_remove");
    if (assignments.size() >= static_cast<std::size_t>(s.n_qubits))
        throw std::invalid_argument("collapse_remove must leave at least one qubit");

    PureState cur = s;
    // Descending qubit order keeps earlier (more significant) bit positions stable.
    for (const auto& a : assignments) {
        const auto k = basis_ket(a.basis, a.bit);
        const int pos = cur.bitpos(a.qubit);
        PureState next;
        next.n_qubits = cur.n_qubits - 1;
        next.amps.resize(cur.dim() >> 1);
        for (std::uint64_t r = 0; r < next.dim(); ++r) {
            const std::uint64_t i0 = insert_bit(r, pos, 0);
            next.amps[r] = std::conj(k[0]) * cur.amps[i0] +
                           std::conj(k[1]) * cur.amps[i0 | (std::uint64_t{1} << pos)];
        }
        cur = std::move(next);
    }
    const double prob = cur.norm_sq();
    if (prob < kZeroBranchTol) return std::nullopt;
    const double inv = 1.0 / std::sqrt(prob);
    for (auto& a : cur.amps) a *= inv;
    return std::make_pair(prob, std::move(cur));
}

std::vector<std::vector<cplx>> discriminating_basis(const std::vector<PureState>& states) {
    if (states.empty()) throw std::invalid_argument("discriminating_basis needs at least one state");
    const int n = states[0].n_qubits;
    const std::uint64_t dim = states[0].dim();
    for (const auto& st : states) {
        if (st.n_qubits != n) throw ValidationError("states must share the qubit count");
        if (std::abs(st.norm_sq() - 1.0) > kNormTol)
            throw ValidationError("states must be normalized");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            cplx ov{0.0, 0.0};
            for (std::uint64_t k = 0; k < dim; ++k)
                ov += std::conj(states[i].amps[k]) * states[j].amps[k];
            if (std::abs(ov) > 1e-9)
                throw NonOrthogonalError("states " + std::to_string(i) + " and " +
                                         std::to_string(j) + " overlap by " +
                                         std::to_string(std::abs(ov)));
        }
    }
    if (states.size() > dim) throw ValidationError("more states than the space can hold");

    std::vector<std::vector<cplx>> basis;
    basis.reserve(dim);
    for (const auto& st : states) basis.push_back(st.amps);

    // Complete with Gram-Schmidt over canonical vectors.
    constexpr double kResidualTol = 1e-6;
    for (std::uint64_t e = 0; e < dim && basis.size() < dim; ++e) {
        std::vector<cplx> v(dim, cplx{0.0, 0.0});
        v[e] = cplx{1.0, 0.0};
        for (const auto& b : basis) {
            cplx ov{0.0, 0.0};
            for (std::uint64_t k = 0; k < dim; ++k) ov += std::conj(b[k]) * v[k];
            for (std::uint64_t k = 0; k < dim; ++k) v[k] -= ov * b[k];
        }
        double nrm = 0.0;
        for (const auto& a : v) nrm += std::norm(a);
        nrm = std::sqrt(nrm);
        if (nrm <= kResidualTol) continue;
        const double inv = 1.0 / nrm;
        for (auto& a : v) a *= inv;
        basis.push_back(std::move(v));
    }
    if (basis.size() != dim) throw ValidationError("failed to complete orthonormal basis");
    return basis;
}

namespace {

struct SubsystemSplit {
    std::vector<std::uint64_t> sub;   // per full index: subsystem basis index
    std::vector<std::uint64_t> rest;  // per full index: compressed remaining bits
    std::uint64_t sub_dim = 0;
    std::uint64_t rest_dim = 0;
};

SubsystemSplit split_indices(const PureState& s, const std::vector<int>& qubits) {
    const int k = static_cast<int>(qubits.size());
    if (k == 0) throw std::invalid_argument("empty qubit list");
    for (int i = 0; i < k; ++i) {
        if (qubits[i] < 0 || qubits[i] >= s.n_qubits)
            throw std::invalid_argument("qubit index out of range");
        if (i > 0 && qubits[i] <= qubits[i - 1])
            throw std::invalid_argument("qubit list must be strictly ascending");
    }
    SubsystemSplit sp;
    sp.sub_dim = std::uint64_t{1} << k;
    sp.rest_dim = s.dim() >> k;
    sp.sub.resize(s.dim());
    sp.rest.resize(s.dim());
    std::uint64_t measured_mask = 0;
    for (int q : qubits) measured_mask |= std::uint64_t{1} << s.bitpos(q);
    for (std::uint64_t idx = 0; idx < s.dim(); ++idx) {
        std::uint64_t u = 0;
        for (int j = 0; j < k; ++j)
            u = (u << 1) | ((idx >> s.bitpos(qubits[j])) & 1);
        std::uint64_t r = 0;
        for (int pos = s.n_qubits - 1; pos >= 0; --pos) {
            if (measured_mask & (std::uint64_t{1} << pos)) continue;
            r = (r << 1) | ((idx >> pos) & 1);
        }
        sp.sub[idx] = u;
        sp.rest[idx] = r;
    }
    return sp;
}

}  // namespace

std::pair<int, PureState> measure_in_basis(const PureState& s, const std::vector<int>& qubits,
                                           const std::vector<std::vector<cplx>>& basis,
                                           double randomness) {
    const auto sp = split_indices(s, qubits);
    if (basis.size() != sp.sub_dim)
        throw ValidationError("basis must contain one vector per subsystem dimension");
    for (const auto& b : basis)
        if (b.size() != sp.sub_dim) throw ValidationError("basis vector has wrong dimension");

    // Overlap coefficients c[m][r] = <b_m (x) e_r | psi>.
    std::vector<std::vector<cplx>> c(sp.sub_dim, std::vector<cplx>(sp.rest_dim, cplx{0.0, 0.0}));
    for (std::uint64_t idx = 0; idx < s.dim(); ++idx) {
        const std::uint64_t u = sp.sub[idx];
        const std::uint64_t r = sp.rest[idx];
        const cplx a = s.amps[idx];
        for (std::uint64_t m = 0; m < sp.sub_dim; ++m) c[m][r] += std::conj(basis[m][u]) * a;
    }
    std::vector<double> probs(sp.sub_dim, 0.0);
    for (std::uint64_t m = 0; m < sp.sub_dim; ++m)
        for (std::uint64_t r = 0; r < sp.rest_dim; ++r) probs[m] += std::norm(c[m][r]);

    int chosen = static_cast<int>(sp.sub_dim) - 1;
    double acc = 0.0;
    for (std::uint64_t m = 0; m < sp.sub_dim; ++m) {
        acc += probs[m];
        if (randomness < acc) {
            chosen = static_cast<int>(m);
            break;
        }
    }
    if (probs[chosen] < kZeroBranchTol) {
        // Degenerate draw landed on an empty branch; take the heaviest instead.
        chosen = static_cast<int>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        if (probs[chosen] < kZeroBranchTol)
            throw ValidationError("measurement on zero-norm state");
    }

    PureState out;
    out.n_qubits = s.n_qubits;
    out.amps.assign(s.dim(), cplx{0.0, 0.0});
    const double inv = 1.0 / std::sqrt(probs[chosen]);
    for (std::uint64_t idx = 0; idx < s.dim(); ++idx)
        out.amps[idx] = basis[chosen][sp.sub[idx]] * c[chosen][sp.rest[idx]] * inv;
    return {chosen, std::move(out)};
}

int measure_in_basis_inplace(PureState& s, const std::vector<int>& qubits,
                             const std::vector<std::vector<cplx>>& basis, double randomness) {
    auto [m, post] = measure_in_basis(s, qubits, basis, randomness);
    s = std::move(post);
    return m;
}

}  // namespace qss
