#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qss/errors.hpp"
#include "qss/measure.hpp"

namespace qss {

// Which entangled state the dealer prepared for a round.
enum class StateTag : unsigned char { Psi, Phi };

enum class RoundUsage : unsigned char { Key, WitnessTest, Discarded };

// Announcement schedule. Naive interleaves basis announcements before any
// outcome is revealed; Reversed makes the last party commit its outcome first.
enum class Ordering : unsigned char { Naive, Reversed };

enum class AttackMode : unsigned char { None, Intercept, ParamUnitary };

inline const char* tag_name(StateTag t) { return t == StateTag::Psi ? "psi" : "phi"; }

inline const char* usage_name(RoundUsage u) {
    switch (u) {
        case RoundUsage::Key: return "key";
        case RoundUsage::WitnessTest: return "test";
        default: return "discard";
    }
}

inline const char* ordering_name(Ordering o) { return o == Ordering::Naive ? "naive" : "reversed"; }

inline const char* attack_mode_name(AttackMode m) {
    switch (m) {
        case AttackMode::None: return "none";
        case AttackMode::Intercept: return "intercept";
        default: return "param-unitary";
    }
}

inline Ordering ordering_from_name(const std::string& s) {
    if (s == "naive") return Ordering::Naive;
    if (s == "reversed") return Ordering::Reversed;
    throw ValidationError("unknown ordering '" + s + "'");
}

inline AttackMode attack_mode_from_name(const std::string& s) {
    if (s == "none") return AttackMode::None;
    if (s == "intercept") return AttackMode::Intercept;
    if (s == "param-unitary") return AttackMode::ParamUnitary;
    throw ValidationError("unknown attack mode '" + s + "'");
}

// Everything one protocol round produced. true_* records what each party
// actually measured; announced_* what it published. They differ only for a
// cheating party.
struct RoundRecord {
    std::uint64_t round_id = 0;
    StateTag tag = StateTag::Psi;
    bool attacked = false;
    RoundUsage usage = RoundUsage::Discarded;
    std::vector<Basis> true_bases;
    std::vector<int> true_bits;
    std::vector<Basis> announced_bases;
    std::vector<int> announced_bits;
};

}  // namespace qss
