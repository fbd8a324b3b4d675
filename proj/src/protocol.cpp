#include "qss/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "qss/errors.hpp"
#include "qss/pauli.hpp"
#include "qss/rng.hpp"

namespace qss {

void ProtocolConfig::validate() const {
    if (n_parties < 3) throw std::invalid_argument("protocol needs at least 3 parties");
    if (num_rounds == 0) throw std::invalid_argument("num_rounds must be positive");
    auto prob = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
    };
    prob(q_z, "q_z");
    prob(p_psi, "p_psi");
    prob(test_fraction, "test_fraction");
    if (!(k_sigma >= 0.0)) throw std::invalid_argument("k_sigma must be non-negative");
    if (qubit_cap < n_parties) throw CapacityError("qubit cap below party count");
}

bool valid_combo(const std::vector<Basis>& bases, StateTag tag) {
    int y = 0;
    for (Basis b : bases) {
        if (b == Basis::Z) return false;
        if (b == Basis::Y) ++y;
    }
    return (y & 1) == (tag == StateTag::Psi ? 0 : 1);
}

namespace {

double tag_phase(StateTag tag, double phi_phase) {
    return tag == StateTag::Psi ? 0.0 : phi_phase;
}

PauliLetter basis_letter(Basis b) {
    switch (b) {
        case Basis::X: return PauliLetter::X;
        case Basis::Y: return PauliLetter::Y;
        default: return PauliLetter::Z;
    }
}

// Memoized combo parities: key rounds reuse a handful of basis combos, so
// the exact expectation is evaluated once per (combo, tag).
struct ParityMemo {
    double phi_phase;
    std::unordered_map<std::uint64_t, int> cache;

    int get(const std::vector<Basis>& bases, StateTag tag) {
        std::uint64_t key = tag == StateTag::Psi ? 0 : 1;
        for (Basis b : bases) key = key * 3 + static_cast<std::uint64_t>(basis_index(b));
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const int parity = combo_parity(bases, tag, phi_phase);
        cache.emplace(key, parity);
        return parity;
    }
};

}  // namespace

int combo_parity(const std::vector<Basis>& bases, StateTag tag, double phi_phase) {
    if (bases.size() < 2) throw std::invalid_argument("combo needs at least 2 bases");
    PauliString ops;
    ops.letters.reserve(bases.size());
    for (Basis b : bases) ops.letters.push_back(basis_letter(b));
    const PureState st = ghz_state(static_cast<int>(bases.size()), tag_phase(tag, phi_phase));
    const double v = expectation(st, ops);
    if (std::abs(std::abs(v) - 1.0) > 1e-9)
        throw InconsistentComboError("combo " + ops.str() + " is not deterministic on the " +
                                     std::string(tag_name(tag)) + " state");
    return v > 0.0 ? 0 : 1;
}

int reconstruct_dealer_bit(const std::vector<Basis>& bases, StateTag tag,
                           const std::vector<int>& other_bits, double phi_phase) {
    if (other_bits.size() + 1 != bases.size())
        throw std::invalid_argument("expected one bit per non-dealer party");
    int x = combo_parity(bases, tag, phi_phase);
    for (int b : other_bits) x ^= b & 1;
    return x;
}

std::optional<double> compute_qber(const std::vector<RoundRecord>& records, double phi_phase) {
    ParityMemo memo{phi_phase, {}};
    std::uint64_t total = 0;
    std::uint64_t errors = 0;
    for (const auto& r : records) {
        if (r.usage != RoundUsage::Key) continue;
        int x = memo.get(r.announced_bases, r.tag);
        for (std::size_t j = 1; j < r.announced_bits.size(); ++j) x ^= r.announced_bits[j] & 1;
        ++total;
        if (x != r.true_bits[0]) ++errors;
    }
    if (total == 0) return std::nullopt;
    return static_cast<double>(errors) / static_cast<double>(total);
}

std::pair<Basis, int> conditional_third_state(Basis a_basis, int a_bit, Basis b_basis, int b_bit) {
    const PureState st = ghz_state(3, 0.0);
    auto res = collapse_remove(st, {{0, a_basis, a_bit}, {1, b_basis, b_bit}});
    if (!res) throw ValidationError("result combination has zero probability");
    const auto& amps = res->second.amps;
    for (int bi = 0; bi < 3; ++bi) {
        for (int bit = 0; bit < 2; ++bit) {
            const auto k = basis_ket(basis_at(bi), bit);
            const double ov =
                std::abs(std::conj(k[0]) * amps[0] + std::conj(k[1]) * amps[1]);
            if (ov >= 1.0 - 1e-9) return {basis_at(bi), bit};
        }
    }
    throw ValidationError("conditional state is not a basis eigenstate");
}

Transcript run_protocol(const ProtocolConfig& config) {
    config.validate();
    Transcript t;
    t.config = config;
    const int n = config.n_parties;
    t.calibration = calibrate_phi_phase(n, config.qubit_cap);
    const double phi = t.calibration.chosen_phase;
    t.report.calibration = t.calibration;

    const bool attack = config.attack != AttackMode::None;
    std::optional<AttackContext> ctx;
    if (attack) {
        std::optional<Mat4> cheat;
        if (config.attack == AttackMode::ParamUnitary)
            cheat = unitary_from_params(config.cheat_params);
        ctx = make_attack_context(n, config.p_psi, config.q_z, phi, config.adversary_prior,
                                  cheat, config.qubit_cap);
    }
    const PureState psi0 = attack ? ctx->psi_global : ghz_state(n, 0.0, config.qubit_cap);
    const PureState phi0 = attack ? ctx->phi_global : ghz_state(n, phi, config.qubit_cap);

    const std::uint64_t rounds = config.num_rounds;
    t.records.resize(rounds);
    if (attack) t.adversary.resize(rounds);
    const int honest_count = attack ? n - 1 : n;

#ifdef QSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ri = 0; ri < static_cast<long long>(rounds); ++ri) {
        const std::uint64_t r = static_cast<std::uint64_t>(ri);
        Rng rng(mix_seed(config.seed, r, 0));
        RoundRecord& rec = t.records[r];
        rec.round_id = r;
        rec.attacked = attack;
        rec.tag = rng.bernoulli(config.p_psi) ? StateTag::Psi : StateTag::Phi;
        PureState state = rec.tag == StateTag::Psi ? psi0 : phi0;

        rec.true_bases.resize(n);
        rec.true_bits.resize(n);
        rec.announced_bases.resize(n);
        rec.announced_bits.resize(n);
        for (int j = 0; j < honest_count; ++j) {
            const Basis b = draw_basis(rng, config.q_z);
            const Outcome o = measure_inplace(state, j, b, rng.next_double());
            rec.true_bases[j] = rec.announced_bases[j] = b;
            rec.true_bits[j] = rec.announced_bits[j] = o.bit;
        }
        if (attack) {
            const std::vector<Basis> hb(rec.announced_bases.begin(),
                                        rec.announced_bases.begin() + (n - 1));
            const AdversaryDecision d = config.ordering == Ordering::Naive
                                            ? respond_naive(*ctx, hb, state, rng)
                                            : respond_blind(*ctx, state, rng);
            rec.true_bases[n - 1] = rec.announced_bases[n - 1] = d.announced_basis;
            rec.true_bits[n - 1] = rec.announced_bits[n - 1] = d.announced_bit;
            t.adversary[r] = d;
        }

        Rng desig(mix_seed(config.seed, r, 1));
        if (desig.bernoulli(config.test_fraction)) {
            rec.usage = RoundUsage::WitnessTest;
        } else if (valid_combo(rec.announced_bases, rec.tag)) {
            rec.usage = RoundUsage::Key;
        } else {
            rec.usage = RoundUsage::Discarded;
        }
    }

    SecurityReport& rep = t.report;
    std::vector<const RoundRecord*> psi_test;
    std::vector<const RoundRecord*> phi_test;
    for (const auto& rec : t.records) {
        (rec.tag == StateTag::Psi ? rep.psi_rounds : rep.phi_rounds)++;
        switch (rec.usage) {
            case RoundUsage::WitnessTest:
                ++rep.test_rounds;
                if (rec.tag == StateTag::Psi) {
                    ++rep.test_psi;
                    psi_test.push_back(&rec);
                } else {
                    ++rep.test_phi;
                    phi_test.push_back(&rec);
                }
                break;
            case RoundUsage::Key:
                ++rep.key_rounds;
                rep.key_bits.push_back(rec.true_bits[0] ? '1' : '0');
                break;
            default:
                ++rep.discarded_rounds;
        }
    }
    const std::uint64_t non_test = rounds - rep.test_rounds;
    rep.sift_rate = non_test == 0
                        ? 0.0
                        : static_cast<double>(rep.key_rounds) / static_cast<double>(non_test);
    rep.expected_sift_rate = std::pow(1.0 - config.q_z, n) / 2.0;

    std::string insufficient;
    try {
        if (!psi_test.empty())
            rep.i1 = estimate_from_rounds(build_witness(n, WitnessVariant::I1), psi_test);
    } catch (const InsufficientDataError& e) {
        insufficient = std::string("I1: ") + e.what();
    }
    try {
        if (!phi_test.empty())
            rep.i2 = estimate_from_rounds(build_witness(n, WitnessVariant::I2), phi_test);
    } catch (const InsufficientDataError& e) {
        if (!insufficient.empty()) insufficient += "; ";
        insufficient += std::string("I2: ") + e.what();
    }
    if (!insufficient.empty()) {
        rep.decision = {SecurityStatus::InsufficientData, insufficient};
    } else {
        rep.decision = decide_secure(rep.i1, rep.i2, config.k_sigma);
    }

    rep.qber = compute_qber(t.records, phi);

    if (attack) {
        ParityMemo memo{phi, {}};
        std::uint64_t kept = 0;
        std::uint64_t correct = 0;
        for (const auto& rec : t.records) {
            if (rec.usage != RoundUsage::Key) continue;
            const AdversaryDecision& d = t.adversary[rec.round_id];
            int guess;
            if (d.hypothesis >= 0) {
                guess = infer_dealer_bit(*ctx, d);
            } else {
                // Blind commitment: the unseen honest bits default to 0.
                guess = memo.get(rec.announced_bases, rec.tag) ^ (d.announced_bit & 1);
            }
            ++kept;
            if (guess == rec.true_bits[0]) ++correct;
        }
        if (kept > 0)
            rep.adversary_accuracy = static_cast<double>(correct) / static_cast<double>(kept);
        std::optional<Mat4> cheat;
        if (config.attack == AttackMode::ParamUnitary)
            cheat = unitary_from_params(config.cheat_params);
        const auto [a1, a2] =
            attacked_marginal_values(n, config.p_psi, phi, cheat, config.qubit_cap);
        rep.attacked_i1 = a1;
        rep.attacked_i2 = a2;
    }
    return t;
}

void for_each_event(const Transcript& t, const std::function<void(const Event&)>& fn) {
    const int n = t.config.n_parties;
    const std::uint64_t rounds = t.records.size();
    std::uint64_t seq = 0;
    auto emit = [&](char kind, int party, std::uint64_t round, std::string value) {
        fn(Event{seq++, kind, party, round, std::move(value)});
    };
    auto bases_block = [&](bool ascending) {
        for (int i = 0; i < n; ++i) {
            const int p = ascending ? i : n - 1 - i;
            for (std::uint64_t r = 0; r < rounds; ++r)
                emit('b', p, r, std::string(1, basis_char(t.records[r].announced_bases[p])));
        }
    };
    auto results_block = [&]() {
        for (int i = 0; i < n; ++i) {
            const int p = n - 1 - i;
            for (std::uint64_t r = 0; r < rounds; ++r)
                emit('r', p, r, t.records[r].announced_bits[p] ? "1" : "0");
        }
    };
    if (t.config.ordering == Ordering::Naive) {
        bases_block(true);
        results_block();
    } else {
        results_block();
        bases_block(false);
    }
    for (std::uint64_t r = 0; r < rounds; ++r) emit('u', 0, r, usage_name(t.records[r].usage));
    for (std::uint64_t r = 0; r < rounds; ++r) emit('t', 0, r, tag_name(t.records[r].tag));
}

}  // namespace qss
