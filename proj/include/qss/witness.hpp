#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/pauli.hpp"
#include "qss/records.hpp"
#include "qss/state.hpp"

namespace qss {

// Exact rational coefficient, kept exact so witness sums of dyadic terms
// round-trip through text without drift.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    bool operator==(const Rational&) const = default;
};

enum class WitnessVariant : unsigned char { I1, I2 };

inline const char* variant_name(WitnessVariant v) { return v == WitnessVariant::I1 ? "I1" : "I2"; }

struct WitnessTerm {
    Rational coeff;
    PauliString ops;
};

struct WitnessSpec {
    int n_qubits = 0;
    WitnessVariant variant = WitnessVariant::I1;
    std::vector<WitnessTerm> terms;
};

// Builds the n-party biseparability witness. A value above zero certifies
// genuine multipartite entanglement; every biseparable state stays at or
// below zero.
WitnessSpec build_witness(int n_qubits, WitnessVariant variant);

// Exact expectation of the witness. The state may carry extra trailing
// qubits; the witness then acts on the leading n_qubits and the rest are
// traced out implicitly.
double evaluate_exact(const WitnessSpec& spec, const PureState& state);
double evaluate_exact(const WitnessSpec& spec, const Ensemble& ensemble);

struct TermStat {
    std::string term;
    Rational coeff;
    long long count = 0;
    double mean = 0.0;
    double variance = 0.0;
};

struct WitnessEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::vector<TermStat> terms;
};

// Estimates the witness from announced bases and outcomes. Full-length x/y
// terms use rounds where every party announced the matching basis; z terms
// only constrain the parties inside their support. Throws
// InsufficientDataError when some term matched no round at all.
WitnessEstimate estimate_from_rounds(const WitnessSpec& spec,
                                     const std::vector<const RoundRecord*>& rounds);

enum class SecurityStatus : unsigned char { Accept, Abort, NotChecked, InsufficientData };

inline const char* status_name(SecurityStatus s) {
    switch (s) {
        case SecurityStatus::Accept: return "accept";
        case SecurityStatus::Abort: return "abort";
        case SecurityStatus::NotChecked: return "not_checked";
        default: return "insufficient_data";
    }
}

struct Decision {
    SecurityStatus status = SecurityStatus::NotChecked;
    std::string reason;
};

// Accepts only if every available estimate clears zero by k_sigma standard
// errors. Estimates are absent when the matching state was never prepared.
Decision decide_secure(const std::optional<WitnessEstimate>& i1,
                       const std::optional<WitnessEstimate>& i2, double k_sigma);

// The second witness flips sign under phase negation, so the protocol fixes
// the phase of the second resource state by exact evaluation at build time.
struct PhaseCalibration {
    double value_plus = 0.0;   // witness on the +pi/2 phase state
    double value_minus = 0.0;  // witness on the -pi/2 phase state
    double chosen_phase = 0.0;
};

PhaseCalibration calibrate_phi_phase(int n_qubits, int qubit_cap = kDefaultQubitCap);

}  // namespace qss
