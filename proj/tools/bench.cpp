#include <chrono>
#include <cstdio>
#include <vector>

#include "qss/gates.hpp"
#include "qss/kernels.hpp"
#include "qss/pauli.hpp"
#include "qss/protocol.hpp"
#include "qss/rng.hpp"
#include "qss/state.hpp"

#ifdef QSS_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using namespace qss;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::vector<cplx> random_amps(int n_qubits) {
    Rng rng(0xb0b);
    std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cplx> a(dim);
    double norm = 0.0;
    for (auto& v : a) {
        v = {rng.next_double() - 0.5, rng.next_double() - 0.5};
        norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    for (auto& v : a) v /= norm;
    return a;
}

template <typename F>
double time_reps(int reps, F&& body) {
    auto t0 = clock_type::now();
    for (int i = 0; i < reps; ++i) body();
    return seconds_since(t0) / reps;
}

void bench_kernels(int n_qubits, int reps) {
    std::vector<cplx> a = random_amps(n_qubits);
    std::vector<cplx> b = a;
    int hi = n_qubits - 1, lo = n_qubits / 2;

    double s1 = time_reps(reps, [&] { kernels::serial::apply_1q(a, lo, gate::kHadamard); });
    double p1 = time_reps(reps, [&] { kernels::par::apply_1q(b, lo, gate::kHadamard); });
    double s2 = time_reps(reps, [&] { kernels::serial::apply_2q(a, hi, lo, gate::kCnot); });
    double p2 = time_reps(reps, [&] { kernels::par::apply_2q(b, hi, lo, gate::kCnot); });

    kernels::PauliMasks m;
    m.flip = (std::uint64_t{1} << n_qubits) - 1;  // all-x string
    cplx sink;
    double se = time_reps(reps, [&] { sink = kernels::serial::pauli_expectation(a, m); });
    double pe = time_reps(reps, [&] { sink += kernels::par::pauli_expectation(b, m); });
    (void)sink;

    std::printf("%2d qubits  1q %8.3f / %8.3f ms  2q %8.3f / %8.3f ms  expect %8.3f / %8.3f ms\n",
                n_qubits, s1 * 1e3, p1 * 1e3, s2 * 1e3, p2 * 1e3, se * 1e3, pe * 1e3);
}

void bench_protocol() {
    ProtocolConfig cfg;
    cfg.num_rounds = 20000;
    cfg.seed = 42;
    auto t0 = clock_type::now();
    Transcript honest = run_protocol(cfg);
    double th = seconds_since(t0);

    cfg.attack = AttackMode::Intercept;
    t0 = clock_type::now();
    Transcript attacked = run_protocol(cfg);
    double ta = seconds_since(t0);

    std::printf("protocol, %llu rounds: honest %.2fs (%.0f rounds/s), wiretapped %.2fs (%.0f rounds/s)\n",
                static_cast<unsigned long long>(cfg.num_rounds), th, cfg.num_rounds / th, ta,
                cfg.num_rounds / ta);
    std::printf("  honest decision %s, wiretapped decision %s\n",
                status_name(honest.report.decision.status),
                status_name(attacked.report.decision.status));
}

}  // namespace

int main() {
#ifdef QSS_HAVE_OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp disabled, parallel kernels fall back to serial\n");
#endif
    std::printf("kernel timings, serial / parallel per call\n");
    bench_kernels(14, 40);
    bench_kernels(16, 20);
    bench_kernels(18, 8);
    bench_kernels(20, 3);
    bench_protocol();
    return 0;
}
