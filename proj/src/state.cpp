#include "qss/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qss/errors.hpp"

namespace qss {

double PureState::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return s;
}

static void check_cap(int n_qubits, int cap) {
    if (n_qubits < 1) throw std::invalid_argument("state needs at least one qubit");
    if (n_qubits > cap)
        throw CapacityError("requested " + std::to_string(n_qubits) +
                            " qubits, cap is " + std::to_string(cap));
}

PureState zero_state(int n_qubits, int cap) {
    check_cap(n_qubits, cap);
    PureState s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    s.amps[0] = 1.0;
    return s;
}

PureState ghz_state(int n_qubits, double phase, int cap) {
    check_cap(n_qubits, cap);
    PureState s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
    const double r = 1.0 / std::sqrt(2.0);
    s.amps.front() = r;
    s.amps.back() = std::polar(r, phase);
    return s;
}

PureState make_state(int n_qubits, std::vector<cplx> amps, int cap) {
    check_cap(n_qubits, cap);
    if (amps.size() != (std::size_t{1} << n_qubits))
        throw std::invalid_argument("amplitude count does not match qubit count");
    PureState s;
    s.n_qubits = n_qubits;
    s.amps = std::move(amps);
    if (std::abs(s.norm_sq() - 1.0) > kNormTol)
        throw ValidationError("state is not normalized");
    return s;
}

PureState append_ancillas(const PureState& s, int count, int cap) {
    if (count < 0) throw std::invalid_argument("negative ancilla count");
    check_cap(s.n_qubits + count, cap);
    PureState out;
    out.n_qubits = s.n_qubits + count;
    out.amps.assign(s.amps.size() << count, cplx{0.0, 0.0});
    // New qubits are appended after the existing ones, i.e. below them in
    // index order, so amplitude i moves to i << count.
    for (std::size_t i = 0; i < s.amps.size(); ++i) out.amps[i << count] = s.amps[i];
    return out;
}

Ensemble make_ensemble(std::vector<std::pair<double, PureState>> members) {
    if (members.empty()) throw std::invalid_argument("empty ensemble");
    double total = 0.0;
    const int n = members.front().second.n_qubits;
    for (const auto& [w, st] : members) {
        if (w < 0.0) throw ValidationError("negative ensemble weight");
        if (st.n_qubits != n) throw std::invalid_argument("mixed qubit counts in ensemble");
        total += w;
    }
    if (std::abs(total - 1.0) > kNormTol)
        throw ValidationError("ensemble weights do not sum to 1");
    Ensemble e;
    e.members = std::move(members);
    return e;
}

}  // namespace qss
