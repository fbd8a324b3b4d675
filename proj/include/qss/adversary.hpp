#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qss/gates.hpp"
#include "qss/measure.hpp"
#include "qss/records.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"
#include "qss/witness.hpp"

namespace qss {

inline int basis_index(Basis b) { return static_cast<int>(b); }

inline Basis basis_at(int idx) {
    switch (idx) {
        case 0: return Basis::X;
        case 1: return Basis::Y;
        case 2: return Basis::Z;
        default: throw std::invalid_argument("basis index out of range");
    }
}

// Shared honest basis draw: Z with probability q_z, otherwise a fair coin
// between X and Y. Consumes one stream value for the Z decision and, when not
// Z, one more for the X/Y coin.
inline Basis draw_basis(Rng& rng, double q_z) {
    if (rng.bernoulli(q_z)) return Basis::Z;
    return rng.bernoulli(0.5) ? Basis::Y : Basis::X;
}

Mat4 matmul4(const Mat4& a, const Mat4& b);
Mat4 kron22(const Mat2& a, const Mat2& b);

// Two-qubit wiretap circuit: Hadamard on the intercepted qubit followed by a
// controlled flip onto a fresh ancilla.
Mat4 intercept_unitary();

// 16-angle parametrization of a two-qubit unitary: four diagonal phases
// followed by six Givens rotations over index pairs (0,1),(0,2),(0,3),(1,2),
// (1,3),(2,3), each with a rotation angle and a relative phase. All angles
// zero gives the identity.
struct CheatUnitaryParams {
    std::array<double, 16> angles{};
};

Mat4 unitary_from_params(const CheatUnitaryParams& p);

// Appends one |0> ancilla per target (in target order) and applies `channel`
// to each (target, its ancilla) pair. Targets must be strictly ascending.
PureState apply_cheat_channel(const PureState& s, const std::vector<int>& targets,
                              const Mat4& channel, int qubit_cap = kDefaultQubitCap);

PureState intercept_entangle(const PureState& s, const std::vector<int>& targets,
                             int qubit_cap = kDefaultQubitCap);

// How the adversary weighs the two possible preparations when interpreting
// its measurement: flat confidence in the first resource state, or Bayesian
// weighting by the preparation probability.
enum class AdversaryPrior : unsigned char { AssumePsi, Bayesian };

inline const char* prior_name(AdversaryPrior p) {
    return p == AdversaryPrior::AssumePsi ? "assume-psi" : "bayesian";
}

inline AdversaryPrior prior_from_name(const std::string& s) {
    if (s == "assume-psi") return AdversaryPrior::AssumePsi;
    if (s == "bayesian") return AdversaryPrior::Bayesian;
    throw ValidationError("unknown adversary prior '" + s + "'");
}

// Precomputed attack tables. The adversary is party n-1; it wiretaps the
// qubits of parties 1..n-2 and ends up holding its own qubit plus n-2
// ancillas. For every combination of the other parties' bases it caches a
// measurement basis on its holdings that separates the conditional states,
// the maximum-likelihood hypothesis per measurement result, and per-hypothesis
// single-qubit response statistics for its own protocol qubit.
struct ComboPlan {
    std::vector<std::vector<cplx>> basis;
    bool exact = false;          // conditional states were exactly orthogonal
    std::vector<int> ml_hyp;     // measurement result -> hypothesis id
    std::vector<double> weight;  // prior probability of each hypothesis
    std::vector<double> p0_own;  // [hyp * 3 + basis] P(own qubit reads 0)
};

struct AttackContext {
    int n_parties = 0;
    double p_psi = 0.5;
    double q_z = 0.0;
    double phi_phase = 0.0;
    AdversaryPrior prior = AdversaryPrior::AssumePsi;
    PureState psi_global;  // wiretapped first resource state (protocol + ancilla qubits)
    PureState phi_global;  // wiretapped second resource state
    std::vector<ComboPlan> combos;  // indexed over the other parties' bases, base 3

    int holdings() const { return n_parties - 1; }  // own qubit + ancillas
    int hyp_count() const { return 2 << holdings(); }
};

// Hypothesis id layout: tag * 2^(n-1) + outcome bits, where bit j (party 0
// most significant) is party j's outcome. Tag 0 is the first resource state.
inline int hyp_tag(const AttackContext& ctx, int hyp) { return hyp >> ctx.holdings(); }
inline int hyp_bit(const AttackContext& ctx, int hyp, int party) {
    return (hyp >> (ctx.n_parties - 2 - party)) & 1;
}

// Builds the attack tables. `cheat`, when present, is applied after the
// wiretap to the adversary's own qubit and each ancilla in turn (a local
// operation on its holdings). Table size grows as 3^(n-1) * 4^(n-1); capped
// at 6 parties.
AttackContext make_attack_context(int n_parties, double p_psi, double q_z, double phi_phase,
                                  AdversaryPrior prior = AdversaryPrior::AssumePsi,
                                  const std::optional<Mat4>& cheat = std::nullopt,
                                  int qubit_cap = kDefaultQubitCap);

int combo_id(const AttackContext& ctx, const std::vector<Basis>& honest_bases);

struct AdversaryDecision {
    Basis announced_basis = Basis::X;
    int announced_bit = 0;
    int outcome_index = -1;  // discriminating measurement result, -1 when blind
    int hypothesis = -1;     // inferred hypothesis id, -1 when blind
    bool crafted = false;    // bit was forged from inferred outcomes
};

// Full-visibility response: the other parties' announced bases are known
// before the adversary commits anything. Consumes stream values in a fixed
// order: own-basis draws, measurement draw, optional tie-break draw.
AdversaryDecision respond_naive(const AttackContext& ctx, const std::vector<Basis>& honest_bases,
                                PureState& state, Rng& rng);

// Outcome-first schedule: the adversary commits its result before any basis
// is public, so it can only measure its own qubit honestly in a drawn basis.
AdversaryDecision respond_blind(const AttackContext& ctx, PureState& state, Rng& rng);

// Adversary's guess of the dealer's outcome from an inferred hypothesis.
// Throws NoKnowledgeError when the decision carries no inference.
int infer_dealer_bit(const AttackContext& ctx, const AdversaryDecision& d);

// Mixture an outside observer ascribes to attacked rounds before any
// measurement: both wiretapped resource states with preparation weights.
Ensemble attacked_mixture(int n_parties, double p_psi, double phi_phase,
                          const std::optional<Mat4>& cheat = std::nullopt,
                          int qubit_cap = kDefaultQubitCap);

// Exact witness pair evaluated on the protocol-qubit marginal of the
// attacked mixture.
std::pair<double, double> attacked_marginal_values(int n_parties, double p_psi, double phi_phase,
                                                   const std::optional<Mat4>& cheat = std::nullopt,
                                                   int qubit_cap = kDefaultQubitCap);

struct SweepRow {
    CheatUnitaryParams params;
    double i1 = 0.0;
    double i2 = 0.0;
    double worst = 0.0;  // min(i1, i2)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SweepRow best_sampled;  // largest worst-case value among random rows
    SweepRow best_refined;  // after coordinate refinement around best_sampled
};

// Random sampling of cheat unitaries followed by coordinate refinement around
// the best sample. Exhibits the trade-off: pushing one witness up drives the
// other down, and no sampled channel lifts both above zero.
SweepResult cheat_tradeoff_sweep(int n_parties, int points, double p_psi, double phi_phase,
                                 std::uint64_t seed, int refine_iters = 64,
                                 int qubit_cap = kDefaultQubitCap);

}  // namespace qss
