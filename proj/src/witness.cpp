#include "qss/witness.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qss/errors.hpp"

namespace qss {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

WitnessSpec build_witness(int n_qubits, WitnessVariant variant) {
    if (n_qubits < 2 || n_qubits > 62)
        throw std::invalid_argument("witness needs between 2 and 62 qubits");
    const int n = n_qubits;
    WitnessSpec spec;
    spec.n_qubits = n;
    spec.variant = variant;

    const unsigned want_parity = variant == WitnessVariant::I1 ? 0u : 1u;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        const int y_count = std::popcount(m);
        if ((static_cast<unsigned>(y_count) & 1u) != want_parity) continue;
        int sign = (y_count / 2) % 2 == 0 ? 1 : -1;
        // The three-party second witness is the sign-flipped image of the
        // general pattern under a local z rotation; keep the printed form.
        if (variant == WitnessVariant::I2 && n == 3) sign = -sign;
        PauliString ops;
        ops.letters.resize(n);
        for (int j = 0; j < n; ++j)
            ops.letters[j] = ((m >> (n - 1 - j)) & 1u) ? PauliLetter::Y : PauliLetter::X;
        spec.terms.push_back({Rational(sign, 8), std::move(ops)});
    }

    // The xy-part equals 2^{n-3} times the extreme off-diagonal coherence,
    // which biseparable states keep below half the total intermediate
    // diagonal weight; the z-part encodes exactly that diagonal bound, so its
    // scale is fixed at 1/8 by the xy normalization. It cancels on the
    // resource states themselves.
    PauliString ident;
    ident.letters.assign(n, PauliLetter::I);
    const long long dim_half = (1ll << (n - 1)) - 1;
    spec.terms.push_back({Rational(-dim_half, 8), std::move(ident)});

    for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
        const int w = std::popcount(t);
        if (w < 2 || (w & 1)) continue;
        PauliString ops;
        ops.letters.resize(n);
        for (int j = 0; j < n; ++j)
            ops.letters[j] = ((t >> (n - 1 - j)) & 1u) ? PauliLetter::Z : PauliLetter::I;
        spec.terms.push_back({Rational(1, 8), std::move(ops)});
    }
    return spec;
}

namespace {

PauliString padded(const PauliString& ops, int total) {
    PauliString p = ops;
    p.letters.resize(total, PauliLetter::I);
    return p;
}

}  // namespace

double evaluate_exact(const WitnessSpec& spec, const PureState& state) {
    if (state.n_qubits < spec.n_qubits)
        throw ValidationError("state has fewer qubits than the witness");
    double total = 0.0;
    for (const auto& term : spec.terms)
        total += term.coeff.value() * expectation(state, padded(term.ops, state.n_qubits));
    return total;
}

double evaluate_exact(const WitnessSpec& spec, const Ensemble& ensemble) {
    if (ensemble.members.empty()) throw ValidationError("empty ensemble");
    double total = 0.0;
    for (const auto& [w, st] : ensemble.members) total += w * evaluate_exact(spec, st);
    return total;
}

namespace {

bool is_xy_term(const PauliString& ops) {
    for (auto l : ops.letters)
        if (l != PauliLetter::X && l != PauliLetter::Y) return false;
    return true;
}

Basis letter_basis(PauliLetter l) {
    switch (l) {
        case PauliLetter::X: return Basis::X;
        case PauliLetter::Y: return Basis::Y;
        default: return Basis::Z;
    }
}

}  // namespace

WitnessEstimate estimate_from_rounds(const WitnessSpec& spec,
                                     const std::vector<const RoundRecord*>& rounds) {
    const int n = spec.n_qubits;
    for (const auto* r : rounds)
        if (static_cast<int>(r->announced_bases.size()) != n ||
            static_cast<int>(r->announced_bits.size()) != n)
            throw ValidationError("round record party count does not match witness");

    WitnessEstimate est;
    double var_acc = 0.0;
    for (const auto& term : spec.terms) {
        TermStat stat;
        stat.term = term.ops.str();
        stat.coeff = term.coeff;
        if (term.ops.is_identity()) {
            stat.count = static_cast<long long>(rounds.size());
            stat.mean = 1.0;
            stat.variance = 0.0;
            est.value += term.coeff.value();
            est.terms.push_back(std::move(stat));
            continue;
        }
        const bool full = is_xy_term(term.ops);
        long long count = 0;
        long long sum = 0;
        for (const auto* r : rounds) {
            bool match = true;
            int parity = 0;
            for (int j = 0; j < n && match; ++j) {
                const PauliLetter l = term.ops.letters[j];
                if (l == PauliLetter::I) continue;
                if (full || l == PauliLetter::Z) {
                    if (r->announced_bases[j] != letter_basis(l)) {
                        match = false;
                        break;
                    }
                }
                parity ^= r->announced_bits[j] & 1;
            }
            if (!match) continue;
            ++count;
            sum += parity ? -1 : 1;
        }
        if (count == 0) throw InsufficientDataError(stat.term);
        stat.count = count;
        stat.mean = static_cast<double>(sum) / static_cast<double>(count);
        if (count >= 2) {
            double v = (1.0 - stat.mean * stat.mean) * static_cast<double>(count) /
                       static_cast<double>(count - 1);
            stat.variance = v < 0.0 ? 0.0 : v;
        } else {
            stat.variance = 1.0;
        }
        const double c = term.coeff.value();
        est.value += c * stat.mean;
        var_acc += c * c * stat.variance / static_cast<double>(count);
        est.terms.push_back(std::move(stat));
    }
    est.std_error = std::sqrt(var_acc);
    return est;
}

namespace {

std::string fmt_estimate(const char* name, const WitnessEstimate& e) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s=%.6f (se %.6f)", name, e.value, e.std_error);
    return buf;
}

}  // namespace

Decision decide_secure(const std::optional<WitnessEstimate>& i1,
                       const std::optional<WitnessEstimate>& i2, double k_sigma) {
    if (!(k_sigma >= 0.0)) throw std::invalid_argument("k_sigma must be non-negative");
    if (!i1 && !i2) return {SecurityStatus::NotChecked, "no witness-test rounds"};

    std::string summary;
    std::string failures;
    auto consider = [&](const char* name, const WitnessEstimate& e) {
        if (!summary.empty()) summary += ", ";
        summary += fmt_estimate(name, e);
        if (!(e.value > k_sigma * e.std_error)) {
            if (!failures.empty()) failures += ", ";
            failures += fmt_estimate(name, e);
        }
    };
    if (i1) consider("I1", *i1);
    if (i2) consider("I2", *i2);

    if (!failures.empty()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " not above zero by %g sigma", k_sigma);
        return {SecurityStatus::Abort, failures + buf};
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, " clear zero by %g sigma", k_sigma);
    return {SecurityStatus::Accept, summary + buf};
}

PhaseCalibration calibrate_phi_phase(int n_qubits, int qubit_cap) {
    const WitnessSpec spec = build_witness(n_qubits, WitnessVariant::I2);
    const double half_pi = std::numbers::pi / 2.0;
    PhaseCalibration cal;
    cal.value_plus = evaluate_exact(spec, ghz_state(n_qubits, half_pi, qubit_cap));
    cal.value_minus = evaluate_exact(spec, ghz_state(n_qubits, -half_pi, qubit_cap));
    cal.chosen_phase = cal.value_plus >= cal.value_minus ? half_pi : -half_pi;
    return cal;
}

}  // namespace qss
