#pragma once

#include <string>
#include <vector>

#include "qss/state.hpp"

namespace qss {

enum class PauliLetter : unsigned char { I, X, Y, Z };

// Tensor product of single-qubit Pauli operators, letter i acting on qubit i.
// Text form uses the correlator shorthand: "xxz1" is X x X x Z x identity.
struct PauliString {
    std::vector<PauliLetter> letters;

    static PauliString parse(const std::string& text);
    std::string str() const;
    int size() const { return static_cast<int>(letters.size()); }
    bool is_identity() const;
};

// <psi|P|psi>. Real for Hermitian P; the imaginary part is folded away after
// a sanity check. Errors if the string length does not match the state.
double expectation(const PureState& s, const PauliString& p);

// Weighted average over ensemble members.
double expectation(const Ensemble& e, const PauliString& p);

}  // namespace qss
