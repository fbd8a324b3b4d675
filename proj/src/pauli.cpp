#include "qss/pauli.hpp"

#include <cmath>
#include <stdexcept>

#include "qss/errors.hpp"
#include "qss/kernels.hpp"

namespace qss {

PauliString PauliString::parse(const std::string& text) {
    PauliString p;
    p.letters.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '1':
            case 'i':
            case 'I': p.letters.push_back(PauliLetter::I); break;
            case 'x':
            case 'X': p.letters.push_back(PauliLetter::X); break;
            case 'y':
            case 'Y': p.letters.push_back(PauliLetter::Y); break;
            case 'z':
            case 'Z': p.letters.push_back(PauliLetter::Z); break;
            default: throw std::invalid_argument(std::string("bad Pauli letter '") + c + "'");
        }
    }
    if (p.letters.empty()) throw std::invalid_argument("empty Pauli string");
    return p;
}

std::string PauliString::str() const {
    std::string out;
    out.reserve(letters.size());
    for (PauliLetter l : letters) {
        switch (l) {
            case PauliLetter::I: out += '1'; break;
            case PauliLetter::X: out += 'x'; break;
            case PauliLetter::Y: out += 'y'; break;
            case PauliLetter::Z: out += 'z'; break;
        }
    }
    return out;
}

bool PauliString::is_identity() const {
    for (PauliLetter l : letters)
        if (l != PauliLetter::I) return false;
    return true;
}

static kernels::PauliMasks masks_for(const PureState& s, const PauliString& p) {
    kernels::PauliMasks m;
    for (int q = 0; q < p.size(); ++q) {
        const std::uint64_t bit = std::uint64_t{1} << s.bitpos(q);
        switch (p.letters[q]) {
            case PauliLetter::X: m.flip |= bit; break;
            case PauliLetter::Y:
                m.flip |= bit;
                m.phase |= bit;
                ++m.y_count;
                break;
            case PauliLetter::Z: m.phase |= bit; break;
            case PauliLetter::I: break;
        }
    }
    return m;
}

double expectation(const PureState& s, const PauliString& p) {
    if (p.size() != s.n_qubits)
        throw std::invalid_argument("Pauli string length does not match state");
    const cplx v = kernels::pauli_expectation(s.amps, masks_for(s, p));
    if (std::abs(v.imag()) > 1e-7)
        throw ValidationError("expectation of Hermitian operator came out complex");
    return v.real();
}

double expectation(const Ensemble& e, const PauliString& p) {
    double acc = 0.0;
    for (const auto& [w, st] : e.members) acc += w * expectation(st, p);
    return acc;
}

}  // namespace qss
