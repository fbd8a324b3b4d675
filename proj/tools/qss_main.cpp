#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "qss/adversary.hpp"
#include "qss/errors.hpp"
#include "qss/protocol.hpp"
#include "qss/serialize.hpp"
#include "qss/state.hpp"
#include "qss/witness.hpp"

namespace {

using namespace qss;

int exit_code_for(SecurityStatus s) {
    switch (s) {
        case SecurityStatus::Accept:
        case SecurityStatus::NotChecked:
            return 0;
        case SecurityStatus::Abort:
            return 2;
        default:
            return 3;
    }
}

std::string f6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_int_value(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("value for '" + key + "' is not an integer: '" + v + "'");
    }
}

std::uint64_t parse_uint_value(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
        std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("value for '" + key + "' is not a non-negative integer: '" + v +
                                 "'");
    }
}

double parse_double_value(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw std::runtime_error("value for '" + key + "' is not a number: '" + v + "'");
    }
}

std::array<double, 16> parse_cheat_csv(const std::string& v) {
    std::array<double, 16> out{};
    std::stringstream ss(v);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= 16) throw std::runtime_error("cheat_params needs exactly 16 values");
        out[k++] = parse_double_value("cheat_params", trim(item));
    }
    if (k != 16) throw std::runtime_error("cheat_params needs exactly 16 values, got " +
                                          std::to_string(k));
    return out;
}

// One entry per non-comment line: (line number, key, value). Format is
// "key = value"; '#' starts a comment.
std::vector<std::tuple<int, std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    std::vector<std::tuple<int, std::string, std::string>> out;
    std::string line;
    int ln = 0;
    while (std::getline(f, line)) {
        ++ln;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(ln) +
                                     ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ":" + std::to_string(ln) + ": empty key");
        out.emplace_back(ln, key, value);
    }
    return out;
}

struct RunSettings {
    ProtocolConfig cfg;
    std::string config_path;
    std::string output_dir = ".";
    std::string report_name = "report.json";
    std::string transcript_name;
    std::string ordering_s = "naive";
    std::string attack_s = "none";
    std::string prior_s = "assume-psi";
    std::string cheat_s;
    bool quiet = false;
};

std::filesystem::path resolve_path(const std::string& dir, const std::string& name) {
    std::filesystem::path p(name);
    return p.is_absolute() ? p : std::filesystem::path(dir) / p;
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
}

void print_summary(std::ostream& os, const Transcript& t) {
    const SecurityReport& r = t.report;
    os << "rounds " << t.config.num_rounds << ": psi " << r.psi_rounds << ", phi " << r.phi_rounds
       << "\n";
    os << "usage: test " << r.test_rounds << " (psi " << r.test_psi << ", phi " << r.test_phi
       << "), key " << r.key_rounds << ", discarded " << r.discarded_rounds << "\n";
    os << "sift rate " << f6(r.sift_rate) << " (expected " << f6(r.expected_sift_rate) << ")\n";
    if (r.i1)
        os << "I1 estimate " << f6(r.i1->value) << " +- " << f6(r.i1->std_error) << "\n";
    else
        os << "I1 estimate n/a\n";
    if (r.i2)
        os << "I2 estimate " << f6(r.i2->value) << " +- " << f6(r.i2->std_error) << "\n";
    else
        os << "I2 estimate n/a\n";
    os << "qber " << (r.qber ? f6(*r.qber) : std::string("n/a")) << "\n";
    if (t.config.attack != AttackMode::None) {
        os << "adversary key accuracy "
           << (r.adversary_accuracy ? f6(*r.adversary_accuracy) : std::string("n/a")) << "\n";
        if (r.attacked_i1 && r.attacked_i2)
            os << "wiretapped-state exact witness: I1 " << f6(*r.attacked_i1) << ", I2 "
               << f6(*r.attacked_i2) << "\n";
    }
    os << "decision: " << status_name(r.decision.status) << " (" << r.decision.reason << ")\n";
}

int cmd_run(RunSettings& s, const std::map<std::string, CLI::Option*>& key_opts) {
    // precedence: flag > environment > config file > default
    if (!s.config_path.empty()) {
        std::map<std::string, std::function<void(const std::string&)>> set;
        set["parties"] = [&](const std::string& v) {
            s.cfg.n_parties = static_cast<int>(parse_int_value("parties", v));
        };
        set["rounds"] = [&](const std::string& v) {
            s.cfg.num_rounds = parse_uint_value("rounds", v);
        };
        set["q_z"] = [&](const std::string& v) { s.cfg.q_z = parse_double_value("q_z", v); };
        set["p_psi"] = [&](const std::string& v) { s.cfg.p_psi = parse_double_value("p_psi", v); };
        set["test_fraction"] = [&](const std::string& v) {
            s.cfg.test_fraction = parse_double_value("test_fraction", v);
        };
        set["ordering"] = [&](const std::string& v) { s.ordering_s = v; };
        set["attack"] = [&](const std::string& v) { s.attack_s = v; };
        set["adversary_prior"] = [&](const std::string& v) { s.prior_s = v; };
        set["cheat_params"] = [&](const std::string& v) { s.cheat_s = v; };
        set["k_sigma"] = [&](const std::string& v) {
            s.cfg.k_sigma = parse_double_value("k_sigma", v);
        };
        set["seed"] = [&](const std::string& v) { s.cfg.seed = parse_uint_value("seed", v); };
        set["qubit_cap"] = [&](const std::string& v) {
            s.cfg.qubit_cap = static_cast<int>(parse_int_value("qubit_cap", v));
        };
        set["output_dir"] = [&](const std::string& v) { s.output_dir = v; };
        set["report"] = [&](const std::string& v) { s.report_name = v; };
        set["transcript"] = [&](const std::string& v) { s.transcript_name = v; };

        std::set<std::string> seen;
        for (const auto& [ln, key, value] : read_config_file(s.config_path)) {
            auto it = set.find(key);
            if (it == set.end())
                throw std::runtime_error(s.config_path + ":" + std::to_string(ln) +
                                         ": unknown key '" + key + "'");
            if (!seen.insert(key).second)
                throw std::runtime_error(s.config_path + ":" + std::to_string(ln) +
                                         ": duplicate key '" + key + "'");
            if (key_opts.at(key)->count() > 0) continue;
            try {
                it->second(value);
            } catch (const std::exception& e) {
                throw std::runtime_error(s.config_path + ":" + std::to_string(ln) + ": " +
                                         e.what());
            }
        }
    }
    if (key_opts.at("output_dir")->count() == 0) {
        if (const char* env = std::getenv("QSS_OUTPUT_DIR"); env && *env) s.output_dir = env;
    }

    s.cfg.ordering = ordering_from_name(s.ordering_s);
    s.cfg.attack = attack_mode_from_name(s.attack_s);
    s.cfg.adversary_prior = prior_from_name(s.prior_s);
    if (!s.cheat_s.empty()) s.cfg.cheat_params.angles = parse_cheat_csv(s.cheat_s);
    s.cfg.validate();

    Transcript t = run_protocol(s.cfg);

    std::filesystem::create_directories(s.output_dir);
    std::filesystem::path report_path = resolve_path(s.output_dir, s.report_name);
    write_text_file(report_path, report_json(t));
    std::filesystem::path transcript_path;
    if (!s.transcript_name.empty()) {
        transcript_path = resolve_path(s.output_dir, s.transcript_name);
        write_text_file(transcript_path, transcript_text(t));
    }

    if (!s.quiet) {
        print_summary(std::cout, t);
        std::cout << "report: " << report_path.string() << "\n";
        if (!transcript_path.empty())
            std::cout << "transcript: " << transcript_path.string() << "\n";
    }
    return exit_code_for(t.report.decision.status);
}

int cmd_truth_table() {
    const std::array<std::pair<Basis, int>, 4> states = {
        {{Basis::X, 0}, {Basis::X, 1}, {Basis::Y, 0}, {Basis::Y, 1}}};
    auto label = [](Basis b, int bit) {
        return std::string(1, basis_char(b)) + (bit ? '-' : '+');
    };
    std::cout << "third party's conditional state given the first two outcomes\n";
    std::cout << "a\\b ";
    for (auto [b, bit] : states) std::cout << "  " << label(b, bit);
    std::cout << "\n";
    for (auto [ab, abit] : states) {
        std::cout << label(ab, abit) << " ";
        for (auto [bb, bbit] : states) {
            auto [cb, cbit] = conditional_third_state(ab, abit, bb, bbit);
            std::cout << "  " << label(cb, cbit);
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_witness_table(int parties, const std::string& variant_s) {
    WitnessVariant variant;
    if (variant_s == "i1")
        variant = WitnessVariant::I1;
    else if (variant_s == "i2")
        variant = WitnessVariant::I2;
    else
        throw ValidationError("unknown variant '" + variant_s + "' (i1|i2)");

    WitnessSpec spec = build_witness(parties, variant);
    double phase = 0.0;
    if (variant == WitnessVariant::I2) {
        PhaseCalibration cal = calibrate_phi_phase(parties);
        phase = cal.chosen_phase;
        std::cout << "phase calibration: value at +pi/2 " << f6(cal.value_plus) << ", at -pi/2 "
                  << f6(cal.value_minus) << ", chosen " << f6(cal.chosen_phase) << "\n";
    }
    std::cout << variant_name(variant) << " over " << parties << " parties, " << spec.terms.size()
              << " terms\n";
    for (const WitnessTerm& t : spec.terms)
        std::cout << std::setw(8) << t.coeff.str() << "  " << t.ops.str() << "\n";
    double value = evaluate_exact(spec, ghz_state(parties, phase));
    std::cout << "exact value on the matching resource state: " << f6(value) << "\n";
    return 0;
}

int cmd_attack_demo(const std::string& mode, int parties, std::uint64_t rounds,
                    std::uint64_t seed) {
    ProtocolConfig cfg;
    cfg.n_parties = parties;
    cfg.num_rounds = rounds;
    cfg.seed = seed;
    std::string title;
    if (mode == "original") {
        // single resource state, no declared test rounds, no z-basis draws
        cfg.q_z = 0.0;
        cfg.p_psi = 1.0;
        cfg.test_fraction = 0.0;
        cfg.attack = AttackMode::Intercept;
        title = "plain scheme, wiretapped: the key leaks and nothing trips";
    } else if (mode == "modified") {
        cfg.attack = AttackMode::Intercept;
        title = "hardened scheme, same wiretap: the witness check aborts";
    } else if (mode == "control") {
        title = "hardened scheme, honest channel: accepted";
    } else {
        throw ValidationError("unknown mode '" + mode + "' (original|modified|control)");
    }
    cfg.validate();
    Transcript t = run_protocol(cfg);
    std::cout << "mode " << mode << ": " << title << "\n";
    std::cout << "config: q_z " << f6(cfg.q_z) << ", p_psi " << f6(cfg.p_psi)
              << ", test_fraction " << f6(cfg.test_fraction) << ", attack "
              << attack_mode_name(cfg.attack) << ", seed " << cfg.seed << "\n";
    print_summary(std::cout, t);
    return exit_code_for(t.report.decision.status);
}

int cmd_sweep(int parties, int points, double p_psi, std::uint64_t seed, int refine,
              const std::string& out_name, const std::string& output_dir) {
    PhaseCalibration cal = calibrate_phi_phase(parties);
    SweepResult res = cheat_tradeoff_sweep(parties, points, p_psi, cal.chosen_phase, seed, refine);

    std::filesystem::create_directories(output_dir);
    std::filesystem::path csv_path = resolve_path(output_dir, out_name);
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + csv_path.string() + "'");
        for (int k = 0; k < 16; ++k) f << 'p' << k << ',';
        f << "i1,i2,min\n";
        f << std::setprecision(12);
        for (const SweepRow& row : res.rows) {
            for (double a : row.params.angles) f << a << ',';
            f << row.i1 << ',' << row.i2 << ',' << row.worst << "\n";
        }
    }

    auto [id_i1, id_i2] = attacked_marginal_values(parties, p_psi, cal.chosen_phase);
    std::cout << "sampled " << points << " wiretap channels over " << parties << " parties\n";
    std::cout << "identity channel: I1 " << f6(id_i1) << ", I2 " << f6(id_i2) << "\n";
    std::cout << "best sampled min(I1,I2) " << f6(res.best_sampled.worst) << " (I1 "
              << f6(res.best_sampled.i1) << ", I2 " << f6(res.best_sampled.i2) << ")\n";
    std::cout << "after refinement      " << f6(res.best_refined.worst) << " (I1 "
              << f6(res.best_refined.i1) << ", I2 " << f6(res.best_refined.i2) << ")\n";
    std::cout << "rows: " << csv_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement-checked quantum secret sharing simulator"};
    app.require_subcommand(1);
    int rc = 0;

    RunSettings rs;
    auto* run = app.add_subcommand("run", "run the protocol and write a report");
    std::map<std::string, CLI::Option*> key_opts;
    run->add_option("--config", rs.config_path, "key = value config file");
    key_opts["parties"] = run->add_option("--parties", rs.cfg.n_parties, "number of parties");
    key_opts["rounds"] = run->add_option("--rounds", rs.cfg.num_rounds, "protocol rounds");
    key_opts["q_z"] = run->add_option("--q-z", rs.cfg.q_z, "per-party z-basis probability");
    key_opts["p_psi"] =
        run->add_option("--p-psi", rs.cfg.p_psi, "probability of the first resource state");
    key_opts["test_fraction"] =
        run->add_option("--test-fraction", rs.cfg.test_fraction, "fraction used for the check");
    key_opts["ordering"] =
        run->add_option("--ordering", rs.ordering_s, "announcement order: naive|reversed");
    key_opts["attack"] =
        run->add_option("--attack", rs.attack_s, "none|intercept|param-unitary");
    key_opts["adversary_prior"] = run->add_option("--adversary-prior", rs.prior_s,
                                                  "assume-psi|bayesian");
    key_opts["cheat_params"] = run->add_option("--cheat-params", rs.cheat_s,
                                               "16 comma-separated angles for param-unitary");
    key_opts["k_sigma"] =
        run->add_option("--k-sigma", rs.cfg.k_sigma, "required significance of the check");
    key_opts["seed"] = run->add_option("--seed", rs.cfg.seed, "rng seed");
    key_opts["qubit_cap"] = run->add_option("--qubit-cap", rs.cfg.qubit_cap, "register size cap");
    key_opts["output_dir"] =
        run->add_option("--output-dir", rs.output_dir,
                        "directory for outputs (env QSS_OUTPUT_DIR, flag wins)");
    key_opts["report"] = run->add_option("--report", rs.report_name, "report file name");
    key_opts["transcript"] =
        run->add_option("--transcript", rs.transcript_name, "also write an event transcript");
    run->add_flag("--quiet", rs.quiet, "suppress the stdout summary");
    run->callback([&] { rc = cmd_run(rs, key_opts); });

    auto* tt = app.add_subcommand("truth-table",
                                  "conditional third-party states for the 3-party resource");
    tt->callback([&] { rc = cmd_truth_table(); });

    int wt_parties = 3;
    std::string wt_variant = "i1";
    auto* wt = app.add_subcommand("witness-table", "print the witness terms and exact value");
    wt->add_option("--parties", wt_parties, "number of parties");
    wt->add_option("--variant", wt_variant, "i1|i2");
    wt->callback([&] { rc = cmd_witness_table(wt_parties, wt_variant); });

    std::string ad_mode;
    int ad_parties = 3;
    std::uint64_t ad_rounds = 40000;
    std::uint64_t ad_seed = 1;
    auto* ad = app.add_subcommand("attack-demo", "wiretap demonstration presets");
    ad->add_option("--mode", ad_mode, "original|modified|control")->required();
    ad->add_option("--parties", ad_parties, "number of parties");
    ad->add_option("--rounds", ad_rounds, "protocol rounds");
    ad->add_option("--seed", ad_seed, "rng seed");
    ad->callback([&] { rc = cmd_attack_demo(ad_mode, ad_parties, ad_rounds, ad_seed); });

    int sw_parties = 3;
    int sw_points = 10000;
    double sw_p_psi = 0.5;
    std::uint64_t sw_seed = 1;
    int sw_refine = 64;
    std::string sw_out = "sweep.csv";
    std::string sw_dir = ".";
    auto* sw = app.add_subcommand("sweep", "sample wiretap channels and map the witness trade-off");
    sw->add_option("--parties", sw_parties, "number of parties");
    sw->add_option("--points", sw_points, "random channels to sample");
    sw->add_option("--p-psi", sw_p_psi, "probability of the first resource state");
    sw->add_option("--seed", sw_seed, "rng seed");
    sw->add_option("--refine", sw_refine, "coordinate-refinement iterations");
    sw->add_option("--out", sw_out, "csv file name");
    auto* sw_dir_opt = sw->add_option("--output-dir", sw_dir, "directory for outputs");
    sw->callback([&] {
        if (sw_dir_opt->count() == 0) {
            if (const char* env = std::getenv("QSS_OUTPUT_DIR"); env && *env) sw_dir = env;
        }
        rc = cmd_sweep(sw_parties, sw_points, sw_p_psi, sw_seed, sw_refine, sw_out, sw_dir);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
