#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qss/adversary.hpp"
#include "qss/measure.hpp"
#include "qss/records.hpp"
#include "qss/state.hpp"
#include "qss/witness.hpp"

namespace qss {

struct ProtocolConfig {
    int n_parties = 3;
    std::uint64_t num_rounds = 0;
    double q_z = 0.2;           // per-party probability of the Z basis
    double p_psi = 0.5;         // dealer's probability of preparing the phase-0 state
    double test_fraction = 0.5; // fraction of rounds designated for the witness check
    Ordering ordering = Ordering::Naive;
    AttackMode attack = AttackMode::None;
    CheatUnitaryParams cheat_params{};  // used when attack == ParamUnitary
    AdversaryPrior adversary_prior = AdversaryPrior::AssumePsi;
    double k_sigma = 3.0;
    std::uint64_t seed = 1;
    int qubit_cap = kDefaultQubitCap;

    void validate() const;
};

struct SecurityReport {
    std::optional<WitnessEstimate> i1;  // estimated on first-state test rounds
    std::optional<WitnessEstimate> i2;  // estimated on second-state test rounds
    Decision decision;
    std::optional<double> qber;
    std::string key_bits;  // dealer's key over Key rounds, round-ascending
    std::uint64_t psi_rounds = 0;
    std::uint64_t phi_rounds = 0;
    std::uint64_t test_rounds = 0;
    std::uint64_t test_psi = 0;
    std::uint64_t test_phi = 0;
    std::uint64_t key_rounds = 0;
    std::uint64_t discarded_rounds = 0;
    double sift_rate = 0.0;           // key rounds / non-test rounds
    double expected_sift_rate = 0.0;  // (1 - q_z)^n / 2
    std::optional<double> adversary_accuracy;
    std::optional<double> attacked_i1;  // exact marginal of the wiretapped mixture
    std::optional<double> attacked_i2;
    PhaseCalibration calibration;
};

struct Transcript {
    ProtocolConfig config;
    PhaseCalibration calibration;
    std::vector<RoundRecord> records;
    std::vector<AdversaryDecision> adversary;  // one per round when an attack is active
    SecurityReport report;
};

// Runs the full protocol: per-round preparation, optional wiretap, basis
// draws and measurements, announcements, test designation, sifting, witness
// estimation, reconstruction and QBER accounting, and the security decision.
// Deterministic given the config (per-round streams derived from the seed).
Transcript run_protocol(const ProtocolConfig& config);

// A basis combination yields key material iff every party measured X or Y
// and the Y-count parity matches the prepared state (even for the first,
// odd for the second).
bool valid_combo(const std::vector<Basis>& bases, StateTag tag);

// Parity bit of an all-X/Y combo on the tagged resource state, from the sign
// of the exact expectation. Throws InconsistentComboError unless the
// expectation has unit magnitude (the combo is deterministic).
int combo_parity(const std::vector<Basis>& bases, StateTag tag, double phi_phase);

// XOR of the other parties' bits with the combo parity recovers the dealer's
// bit. other_bits are parties 1..n-1 in order.
int reconstruct_dealer_bit(const std::vector<Basis>& bases, StateTag tag,
                           const std::vector<int>& other_bits, double phi_phase);

// Fraction of Key rounds whose reconstruction disagrees with the dealer's
// true bit; absent when there are no Key rounds.
std::optional<double> compute_qber(const std::vector<RoundRecord>& records, double phi_phase);

// Conditional state of the third qubit of the 3-party phase-0 resource after
// the first two parties found the given eigenstates. Errors if the result is
// not a basis eigenstate or the combination has zero probability.
std::pair<Basis, int> conditional_third_state(Basis a_basis, int a_bit, Basis b_basis, int b_bit);

// One classical announcement event. kind: 'b' basis, 'r' result, 'u' usage
// designation, 't' state-tag reveal.
struct Event {
    std::uint64_t seq = 0;
    char kind = 'b';
    int party = -1;
    std::uint64_t round = 0;
    std::string value;
};

// Streams the transcript's announcement events in policy order with
// consecutive sequence numbers. Naive: bases parties 0..n-1 then results
// parties n-1..0; Reversed: results parties n-1..0 then bases parties
// n-1..0. Rounds ascend within each party block; usage then tag reveals
// follow all announcements. The last party's result block always comes
// first, so a forged bit can never depend on honest results.
void for_each_event(const Transcript& t, const std::function<void(const Event&)>& fn);

}  // namespace qss
