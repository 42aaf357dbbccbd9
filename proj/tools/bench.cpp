// Benchmarks the OpenMP kernels against their serial reference
// implementations: the subset-DP ranking, the partition scan, and the
// synthetic-respondent sampler.

#include <chrono>
#include <cstdio>
#include <vector>

#include "thinkrank/model.hpp"
#include "thinkrank/rank_default.hpp"
#include "thinkrank/rank_variant.hpp"
#include "thinkrank/rng.hpp"
#include "thinkrank/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace thinkrank;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Mat random_matrix(int n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Mat m(n, n);
    for (double& v : m.a) v = rng.next_unit();
    return m;
}

std::vector<double> random_positive(int n, std::uint64_t seed) {
    RngStream rng(seed, 1);
    std::vector<double> p(n);
    for (double& v : p) v = 0.05 + rng.next_unit();
    return p;
}

template <typename F>
double time_ms(F&& f) {
    const double t0 = now_ms();
    f();
    return now_ms() - t0;
}

ThinkingModel bench_model() {
    ThinkingModel model;
    model.answers = {"3", "4", "6"};
    model.types = {"hi", "lo"};
    model.w = mat_from({{0.0, 1.0, 0.0}, {0.8, 0.0, 0.2}});
    model.lambda = mat_from({{0.15, 0.15}, {0.0, 0.7}});
    return model;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "parallel", "speedup");

    for (int n : {14, 16, 18}) {
        const Mat m = random_matrix(n, 11 + n);
        const std::vector<double> p = random_positive(n, 23 + n);
        Ranking rs, rp;
        const double ts = time_ms([&] { rs = rank_default_serial(m, p); });
        const double tp = time_ms([&] { rp = rank_default(m, p); });
        std::printf("%-28s %10.1f %10.1f %7.2fx%s\n",
                    ("rank_default |A|=" + std::to_string(n)).c_str(), ts, tp, ts / tp,
                    rs.order == rp.order ? "" : "  MISMATCH");
    }

    for (int n : {10, 11, 12}) {
        const Mat m = random_matrix(n, 31 + n);
        const std::vector<double> p = random_positive(n, 47 + n);
        ClusterHierarchy hs, hp;
        const double ts = time_ms([&] { hs = rank_variant_serial(m, p); });
        const double tp = time_ms([&] { hp = rank_variant(m, p); });
        std::printf("%-28s %10.1f %10.1f %7.2fx%s\n",
                    ("rank_variant |A|=" + std::to_string(n)).c_str(), ts, tp, ts / tp,
                    hs.objective == hp.objective ? "" : "  MISMATCH");
    }

    {
        const ThinkingModel model = bench_model();
        const std::int64_t n = 2'000'000;
        // each pass owns its vector inside the timer and frees it before the
        // other runs, so neither pays for the other's live heap
        bool match = true;
        const double ts = time_ms([&] {
            const std::vector<ResponseRecord> serial = sample_dataset(model, n, 7);
            match = match && serial[12345] == detail::sample_record(model, 7, 12345, "q1");
        });
        const double tp = time_ms([&] {
            const std::vector<ResponseRecord> parallel = sample_dataset_parallel(model, n, 7);
            match = match && parallel[12345] == detail::sample_record(model, 7, 12345, "q1");
        });
        std::printf("%-28s %10.1f %10.1f %7.2fx%s\n", "sample_dataset n=2e6", ts, tp, ts / tp,
                    match ? "" : "  MISMATCH");
    }
    return 0;
}
