#include "qss/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#ifdef QSS_HAVE_OPENMP
#include <omp.h>
#endif

#include "qss/errors.hpp"

namespace qss {

Mat4 matmul4(const Mat4& a, const Mat4& b) {
    Mat4 c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a[i * 4 + k];
            if (aik == cplx{0.0, 0.0}) continue;
            for (int j = 0; j < 4; ++j) c[i * 4 + j] += aik * b[k * 4 + j];
        }
    return c;
}

Mat4 kron22(const Mat2& a, const Mat2& b) {
    Mat4 c{};
    for (int i0 = 0; i0 < 2; ++i0)
        for (int j0 = 0; j0 < 2; ++j0)
            for (int i1 = 0; i1 < 2; ++i1)
                for (int j1 = 0; j1 < 2; ++j1)
                    c[(i0 * 2 + i1) * 4 + (j0 * 2 + j1)] = a[i0 * 2 + j0] * b[i1 * 2 + j1];
    return c;
}

Mat4 intercept_unitary() {
    return matmul4(gate::kCnot, kron22(gate::kHadamard, gate::kIdentity));
}

Mat4 unitary_from_params(const CheatUnitaryParams& p) {
    Mat4 u{};
    for (int i = 0; i < 4; ++i) u[i * 4 + i] = std::polar(1.0, p.angles[12 + i]);
    static constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 6; ++k) {
        const double th = p.angles[2 * k];
        const double ph = p.angles[2 * k + 1];
        const int a = kPairs[k][0];
        const int b = kPairs[k][1];
        Mat4 g{};
        for (int i = 0; i < 4; ++i) g[i * 4 + i] = cplx{1.0, 0.0};
        g[a * 4 + a] = cplx{std::cos(th), 0.0};
        g[b * 4 + b] = cplx{std::cos(th), 0.0};
        g[a * 4 + b] = -std::polar(std::sin(th), ph);
        g[b * 4 + a] = std::polar(std::sin(th), -ph);
        u = matmul4(g, u);
    }
    if (!is_unitary(u)) throw ValidationError("parametrized matrix failed the unitarity check");
    return u;
}

PureState apply_cheat_channel(const PureState& s, const std::vector<int>& targets,
                              const Mat4& channel, int qubit_cap) {
    if (targets.empty()) throw std::invalid_argument("no target qubits");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= s.n_qubits)
            throw std::invalid_argument("target qubit out of range");
        if (i > 0 && targets[i] <= targets[i - 1])
            throw std::invalid_argument("targets must be strictly ascending");
    }
    PureState out = append_ancillas(s, static_cast<int>(targets.size()), qubit_cap);
    for (std::size_t i = 0; i < targets.size(); ++i)
        apply_gate_inplace(out, channel, targets[i], s.n_qubits + static_cast<int>(i));
    return out;
}

PureState intercept_entangle(const PureState& s, const std::vector<int>& targets, int qubit_cap) {
    return apply_cheat_channel(s, targets, intercept_unitary(), qubit_cap);
}

namespace {

constexpr int kMaxAttackParties = 6;
constexpr double kTinyProb = 1e-30;

std::vector<int> intercept_targets(int n_parties) {
    std::vector<int> t;
    for (int j = 1; j <= n_parties - 2; ++j) t.push_back(j);
    return t;
}

// Wiretapped resource state for one tag, optionally with the extra local
// unitary on (own qubit, each ancilla).
PureState build_global(int n_parties, double phase, const std::optional<Mat4>& cheat,
                       int qubit_cap) {
    PureState st = intercept_entangle(ghz_state(n_parties, phase, qubit_cap),
                                      intercept_targets(n_parties), qubit_cap);
    if (cheat) {
        const Mat4 u = *cheat;
        if (!is_unitary(u)) throw ValidationError("cheat matrix failed the unitarity check");
        for (int j = 0; j < n_parties - 2; ++j)
            apply_gate_inplace(st, u, n_parties - 1, n_parties + j);
    }
    return st;
}

std::uint64_t pow3(int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
}

// Greedy orthonormalization of the seed list followed by canonical
// completion. Seeds that are linearly dependent on earlier ones are dropped.
std::vector<std::vector<cplx>> complete_basis(const std::vector<std::vector<cplx>>& seeds,
                                              std::uint64_t dim) {
    std::vector<std::vector<cplx>> basis;
    basis.reserve(dim);
    auto try_add = [&](std::vector<cplx> v, double keep_tol) {
        for (const auto& b : basis) {
            cplx ov{0.0, 0.0};
            for (std::uint64_t k = 0; k < dim; ++k) ov += std::conj(b[k]) * v[k];
            for (std::uint64_t k = 0; k < dim; ++k) v[k] -= ov * b[k];
        }
        double nrm = 0.0;
        for (const auto& a : v) nrm += std::norm(a);
        nrm = std::sqrt(nrm);
        if (nrm <= keep_tol) return;
        for (auto& a : v) a *= 1.0 / nrm;
        basis.push_back(std::move(v));
    };
    for (const auto& s : seeds) {
        if (basis.size() == dim) break;
        try_add(s, 1e-9);
    }
    for (std::uint64_t e = 0; e < dim && basis.size() < dim; ++e) {
        std::vector<cplx> v(dim, cplx{0.0, 0.0});
        v[e] = cplx{1.0, 0.0};
        try_add(std::move(v), 1e-6);
    }
    if (basis.size() != dim) throw ValidationError("failed to complete measurement basis");
    return basis;
}

}  // namespace

int combo_id(const AttackContext& ctx, const std::vector<Basis>& honest_bases) {
    if (static_cast<int>(honest_bases.size()) != ctx.n_parties - 1)
        throw std::invalid_argument("expected one basis per non-adversary party");
    int id = 0;
    for (Basis b : honest_bases) id = id * 3 + basis_index(b);
    return id;
}

AttackContext make_attack_context(int n_parties, double p_psi, double q_z, double phi_phase,
                                  AdversaryPrior prior, const std::optional<Mat4>& cheat,
                                  int qubit_cap) {
    if (n_parties < 3) throw std::invalid_argument("attack needs at least 3 parties");
    if (n_parties > kMaxAttackParties)
        throw CapacityError("attack tables limited to " + std::to_string(kMaxAttackParties) +
                            " parties");
    if (p_psi < 0.0 || p_psi > 1.0) throw std::invalid_argument("p_psi must lie in [0,1]");

    AttackContext ctx;
    ctx.n_parties = n_parties;
    ctx.p_psi = p_psi;
    ctx.q_z = q_z;
    ctx.phi_phase = phi_phase;
    ctx.prior = prior;
    ctx.psi_global = build_global(n_parties, 0.0, cheat, qubit_cap);
    ctx.phi_global = build_global(n_parties, phi_phase, cheat, qubit_cap);

    const int honest = n_parties - 1;
    const int hold = ctx.holdings();
    const std::uint64_t dim = std::uint64_t{1} << hold;
    const std::uint64_t bit_patterns = std::uint64_t{1} << honest;
    const int n_hyp = ctx.hyp_count();
    const std::uint64_t n_combos = pow3(honest);

    const double tag_prior[2] = {
        prior == AdversaryPrior::AssumePsi ? 1.0 : p_psi,
        prior == AdversaryPrior::AssumePsi ? 0.0 : 1.0 - p_psi,
    };
    const int source_tag = p_psi > 0.0 ? 0 : 1;

    ctx.combos.resize(n_combos);
    for (std::uint64_t c = 0; c < n_combos; ++c) {
        ComboPlan& plan = ctx.combos[c];
        plan.weight.assign(n_hyp, 0.0);
        plan.p0_own.assign(static_cast<std::size_t>(n_hyp) * 3, 0.5);
        std::vector<std::vector<cplx>> residual(n_hyp);

        std::vector<Basis> bases(honest);
        {
            std::uint64_t rem = c;
            for (int j = honest - 1; j >= 0; --j) {
                bases[j] = basis_at(static_cast<int>(rem % 3));
                rem /= 3;
            }
        }
        for (int tag = 0; tag < 2; ++tag) {
            const PureState& global = tag == 0 ? ctx.psi_global : ctx.phi_global;
            for (std::uint64_t bits = 0; bits < bit_patterns; ++bits) {
                std::vector<QubitAssignment> asg(honest);
                for (int j = 0; j < honest; ++j)
                    asg[j] = {j, bases[j], static_cast<int>((bits >> (honest - 1 - j)) & 1)};
                auto res = collapse_remove(global, std::move(asg));
                if (!res) continue;
                const int h = tag * static_cast<int>(bit_patterns) + static_cast<int>(bits);
                plan.weight[h] = tag_prior[tag] * res->first;
                for (int bi = 0; bi < 3; ++bi)
                    plan.p0_own[static_cast<std::size_t>(h) * 3 + bi] =
                        prob_bit0(res->second, 0, basis_at(bi));
                residual[h] = std::move(res->second.amps);
            }
        }

        // Measurement basis from the conditional states of the assumed tag;
        // exact discrimination when they are orthogonal, greedy otherwise.
        std::vector<PureState> source;
        std::vector<std::vector<cplx>> seeds;
        for (std::uint64_t bits = 0; bits < bit_patterns; ++bits) {
            const int h = source_tag * static_cast<int>(bit_patterns) + static_cast<int>(bits);
            if (residual[h].empty()) continue;
            PureState st;
            st.n_qubits = hold;
            st.amps = residual[h];
            seeds.push_back(residual[h]);
            source.push_back(std::move(st));
        }
        try {
            plan.basis = discriminating_basis(source);
            plan.exact = true;
        } catch (const NonOrthogonalError&) {
            plan.basis = complete_basis(seeds, dim);
            plan.exact = false;
        }

        plan.ml_hyp.assign(dim, 0);
        for (std::uint64_t m = 0; m < dim; ++m) {
            double best = -1.0;
            double best_raw = -1.0;
            int best_h = 0;
            int best_raw_h = -1;
            for (int h = 0; h < n_hyp; ++h) {
                if (residual[h].empty()) continue;
                cplx ov{0.0, 0.0};
                for (std::uint64_t k = 0; k < dim; ++k)
                    ov += std::conj(plan.basis[m][k]) * residual[h][k];
                const double raw = std::norm(ov);
                const double score = plan.weight[h] * raw;
                if (score > best) {
                    best = score;
                    best_h = h;
                }
                if (raw > best_raw) {
                    best_raw = raw;
                    best_raw_h = h;
                }
            }
            plan.ml_hyp[m] = best > kTinyProb || best_raw_h < 0 ? best_h : best_raw_h;
        }
    }
    return ctx;
}

namespace {

std::vector<int> holding_qubits(const AttackContext& ctx) {
    std::vector<int> q;
    q.push_back(ctx.n_parties - 1);
    for (int j = 0; j < ctx.n_parties - 2; ++j) q.push_back(ctx.n_parties + j);
    return q;
}

int ml_bit(const ComboPlan& plan, int hyp, Basis announced, Rng& rng) {
    const double p0 = plan.p0_own[static_cast<std::size_t>(hyp) * 3 + basis_index(announced)];
    if (std::abs(p0 - 0.5) <= 1e-9) return rng.bernoulli(0.5) ? 1 : 0;
    return p0 > 0.5 ? 0 : 1;
}

}  // namespace

AdversaryDecision respond_naive(const AttackContext& ctx, const std::vector<Basis>& honest_bases,
                                PureState& state, Rng& rng) {
    const int id = combo_id(ctx, honest_bases);
    const ComboPlan& plan = ctx.combos[id];

    bool honest_z = false;
    int y_count = 0;
    for (Basis b : honest_bases) {
        if (b == Basis::Z) honest_z = true;
        if (b == Basis::Y) ++y_count;
    }

    AdversaryDecision d;
    // Mimic the honest marginal: forced Z when someone already announced Z
    // (the round cannot become key material), otherwise the honest draw.
    d.announced_basis = honest_z ? Basis::Z : draw_basis(rng, ctx.q_z);

    d.outcome_index =
        measure_in_basis_inplace(state, holding_qubits(ctx), plan.basis, rng.next_double());
    d.hypothesis = plan.ml_hyp[d.outcome_index];

    if (!honest_z && d.announced_basis != Basis::Z) {
        if (d.announced_basis == Basis::Y) ++y_count;
        if ((y_count & 1) == 0) {
            // Valid combo for the assumed resource state: forge the bit that
            // completes its parity rule given the inferred honest outcomes.
            int x = (y_count / 2) & 1;
            for (int j = 0; j < ctx.n_parties - 1; ++j) x ^= hyp_bit(ctx, d.hypothesis, j);
            d.announced_bit = x;
            d.crafted = true;
            return d;
        }
    }
    d.announced_bit = ml_bit(plan, d.hypothesis, d.announced_basis, rng);
    return d;
}

AdversaryDecision respond_blind(const AttackContext& ctx, PureState& state, Rng& rng) {
    AdversaryDecision d;
    d.announced_basis = draw_basis(rng, ctx.q_z);
    d.announced_bit =
        measure_inplace(state, ctx.n_parties - 1, d.announced_basis, rng.next_double()).bit;
    return d;
}

int infer_dealer_bit(const AttackContext& ctx, const AdversaryDecision& d) {
    if (d.hypothesis < 0)
        throw NoKnowledgeError("no discrimination result recorded for this round");
    return hyp_bit(ctx, d.hypothesis, 0);
}

Ensemble attacked_mixture(int n_parties, double p_psi, double phi_phase,
                          const std::optional<Mat4>& cheat, int qubit_cap) {
    if (p_psi < 0.0 || p_psi > 1.0) throw std::invalid_argument("p_psi must lie in [0,1]");
    std::vector<std::pair<double, PureState>> members;
    members.emplace_back(p_psi, build_global(n_parties, 0.0, cheat, qubit_cap));
    members.emplace_back(1.0 - p_psi, build_global(n_parties, phi_phase, cheat, qubit_cap));
    return make_ensemble(std::move(members));
}

std::pair<double, double> attacked_marginal_values(int n_parties, double p_psi, double phi_phase,
                                                   const std::optional<Mat4>& cheat,
                                                   int qubit_cap) {
    const Ensemble mix = attacked_mixture(n_parties, p_psi, phi_phase, cheat, qubit_cap);
    const WitnessSpec w1 = build_witness(n_parties, WitnessVariant::I1);
    const WitnessSpec w2 = build_witness(n_parties, WitnessVariant::I2);
    return {evaluate_exact(w1, mix), evaluate_exact(w2, mix)};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SweepRow evaluate_params(int n_parties, double p_psi, double phi_phase,
                         const CheatUnitaryParams& params, int qubit_cap) {
    SweepRow row;
    row.params = params;
    const auto [i1, i2] =
        attacked_marginal_values(n_parties, p_psi, phi_phase, unitary_from_params(params),
                                 qubit_cap);
    row.i1 = i1;
    row.i2 = i2;
    row.worst = std::min(i1, i2);
    return row;
}

}  // namespace

SweepResult cheat_tradeoff_sweep(int n_parties, int points, double p_psi, double phi_phase,
                                 std::uint64_t seed, int refine_iters, int qubit_cap) {
    if (points < 1) throw std::invalid_argument("sweep needs at least one point");
    SweepResult out;
    out.rows.resize(points);

#ifdef QSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < points; ++i) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), 2));
        CheatUnitaryParams p;
        for (int k = 0; k < 6; ++k) {
            p.angles[2 * k] = std::asin(std::sqrt(rng.next_double()));
            p.angles[2 * k + 1] = rng.next_double() * kTwoPi;
        }
        for (int k = 12; k < 16; ++k) p.angles[k] = rng.next_double() * kTwoPi;
        out.rows[i] = evaluate_params(n_parties, p_psi, phi_phase, p, qubit_cap);
    }

    out.best_sampled = out.rows[0];
    for (const auto& r : out.rows)
        if (r.worst > out.best_sampled.worst) out.best_sampled = r;

    // Coordinate ascent on min(i1, i2) around the best sample, halving the
    // step whenever a full pass over the coordinates yields no improvement.
    SweepRow best = out.best_sampled;
    double step = 0.25;
    for (int it = 0; it < refine_iters; ++it) {
        bool improved = false;
        for (int k = 0; k < 16; ++k) {
            for (double dir : {+1.0, -1.0}) {
                CheatUnitaryParams p = best.params;
                p.angles[k] += dir * step;
                const SweepRow cand = evaluate_params(n_parties, p_psi, phi_phase, p, qubit_cap);
                if (cand.worst > best.worst) {
                    best = cand;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
            if (step < 1e-6) break;
        }
    }
    out.best_refined = best;
    return out;
}

}  // namespace qss
