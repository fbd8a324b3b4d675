#include "qss/serialize.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"

namespace qss {

namespace {

std::string bases_str(const std::vector<Basis>& bases) {
    std::string s;
    s.reserve(bases.size());
    for (Basis b : bases) s.push_back(basis_char(b));
    return s;
}

std::string bits_str(const std::vector<int>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (int b : bits) s.push_back(b ? '1' : '0');
    return s;
}

using nlohmann::json;

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json estimate_json(const std::optional<WitnessEstimate>& e) {
    if (!e) return nullptr;
    json terms = json::array();
    for (const auto& t : e->terms) {
        terms.push_back({{"term", t.term},
                         {"coeff", t.coeff.str()},
                         {"count", t.count},
                         {"mean", t.mean},
                         {"variance", t.variance}});
    }
    return {{"value", e->value}, {"std_error", e->std_error}, {"terms", terms}};
}

}  // namespace

void write_transcript(std::ostream& os, const Transcript& t) {
    const ProtocolConfig& c = t.config;
    os << "# qss-transcript v1\n";
    os << "# seed " << c.seed << " parties " << c.n_parties << " rounds " << c.num_rounds
       << " ordering " << ordering_name(c.ordering) << " attack " << attack_mode_name(c.attack)
       << "\n";
    for_each_event(t, [&os](const Event& e) {
        os << "E " << e.seq << ' ' << e.kind << ' ' << e.party << ' ' << e.round << ' ' << e.value
           << '\n';
    });
    for (const RoundRecord& r : t.records) {
        os << "R " << r.round_id << ' ' << tag_name(r.tag) << ' ' << (r.attacked ? 1 : 0) << ' '
           << usage_name(r.usage) << ' ' << bases_str(r.true_bases) << ' ' << bits_str(r.true_bits)
           << ' ' << bases_str(r.announced_bases) << ' ' << bits_str(r.announced_bits) << '\n';
    }
}

std::string transcript_text(const Transcript& t) {
    std::ostringstream os;
    write_transcript(os, t);
    return os.str();
}

std::string report_json(const Transcript& t) {
    const ProtocolConfig& c = t.config;
    const SecurityReport& r = t.report;

    json cfg{{"parties", c.n_parties},
             {"rounds", c.num_rounds},
             {"q_z", c.q_z},
             {"p_psi", c.p_psi},
             {"test_fraction", c.test_fraction},
             {"ordering", ordering_name(c.ordering)},
             {"attack", attack_mode_name(c.attack)},
             {"adversary_prior", prior_name(c.adversary_prior)},
             {"k_sigma", c.k_sigma},
             {"seed", c.seed},
             {"qubit_cap", c.qubit_cap}};
    if (c.attack == AttackMode::ParamUnitary) cfg["cheat_params"] = c.cheat_params.angles;

    json j{{"schema", "qss-report/1"},
           {"seed", c.seed},
           {"config", cfg},
           {"phase_calibration",
            {{"value_plus", r.calibration.value_plus},
             {"value_minus", r.calibration.value_minus},
             {"chosen_phase", r.calibration.chosen_phase}}},
           {"counts",
            {{"rounds", c.num_rounds},
             {"psi", r.psi_rounds},
             {"phi", r.phi_rounds},
             {"test", r.test_rounds},
             {"test_psi", r.test_psi},
             {"test_phi", r.test_phi},
             {"key", r.key_rounds},
             {"discarded", r.discarded_rounds}}},
           {"sift_rate", r.sift_rate},
           {"expected_sift_rate", r.expected_sift_rate},
           {"qber", opt_json(r.qber)},
           {"estimates", {{"i1", estimate_json(r.i1)}, {"i2", estimate_json(r.i2)}}},
           {"decision",
            {{"status", status_name(r.decision.status)}, {"reason", r.decision.reason}}},
           {"key", {{"length", r.key_bits.size()}, {"bits", r.key_bits}}}};
    if (c.attack != AttackMode::None) {
        j["attack"] = json{{"mode", attack_mode_name(c.attack)},
                           {"adversary_accuracy", opt_json(r.adversary_accuracy)},
                           {"marginal_i1", opt_json(r.attacked_i1)},
                           {"marginal_i2", opt_json(r.attacked_i2)}};
    } else {
        j["attack"] = nullptr;
    }
    return j.dump(2) + "\n";
}

void write_report(std::ostream& os, const Transcript& t) { os << report_json(t); }

}  // namespace qss
