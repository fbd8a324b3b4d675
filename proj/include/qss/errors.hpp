#pragma once

#include <stdexcept>
#include <string>

namespace qss {

// Requested register would exceed the configured qubit cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical validation failed (unnormalized state, non-unitary gate, bad weights, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// State discrimination requested for a non-orthogonal set.
struct NonOrthogonalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A correlator had no matching rounds; `term` names the offending Pauli string.
struct InsufficientDataError : std::runtime_error {
    std::string term;
    explicit InsufficientDataError(const std::string& term_name)
        : std::runtime_error("no matching rounds for term " + term_name), term(term_name) {}
};

// A basis combination is not deterministic for the given resource state.
struct InconsistentComboError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adversary knowledge was requested for a round it never touched.
struct NoKnowledgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qss
