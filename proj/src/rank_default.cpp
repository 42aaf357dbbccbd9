#include "thinkrank/rank_default.hpp"

#include <bit>
#include <string>

namespace thinkrank {

namespace {

void check_inputs(const Mat& m, std::span<const double> p, int cap, const char* what) {
    if (!m.square()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
    if (m.rows == 0) throw std::invalid_argument(std::string(what) + ": empty answer set");
    if (m.rows > cap)
        throw CapExceeded(std::string(what) + ": answer set too large for exact search (|A| = " +
                          std::to_string(m.rows) + " > " + std::to_string(cap) + ")");
    if (static_cast<int>(p.size()) != m.rows)
        throw std::invalid_argument(std::string(what) + ": p has " + std::to_string(p.size()) +
                                    " entries, expected " + std::to_string(m.rows));
    for (int i = 0; i < m.rows; ++i)
        if (!(p[i] > 0.0))
            throw std::invalid_argument(std::string(what) + ": p[" + std::to_string(i) +
                                        "] must be strictly positive");
}

// Σ_{g ∈ rest} m[a][g]², bits of rest ascending. Fixed accumulation order so
// serial and parallel DP schedules produce bit-identical scores.
inline double cross_sq(const double* row, std::uint32_t rest) {
    double s = 0.0;
    while (rest) {
        const int g = std::countr_zero(rest);
        rest &= rest - 1;
        s += row[g] * row[g];
    }
    return s;
}

// Evaluates one subset: the best first answer is the one maximizing
// best[rest] + cross, ties toward larger p (first hit wins on full ties).
inline void relax_mask(const double* m, int n, const double* p, std::uint32_t mask,
                       double* best, std::uint8_t* pick) {
    double best_val = -1.0;
    int best_first = -1;
    std::uint32_t iter = mask;
    while (iter) {
        const int a = std::countr_zero(iter);
        iter &= iter - 1;
        const std::uint32_t rest = mask & ~(1u << a);
        const double val = best[rest] + cross_sq(m + static_cast<std::size_t>(a) * n, rest);
        if (best_first < 0 || val > best_val ||
            (val == best_val && p[a] > p[best_first])) {
            best_val = val;
            best_first = a;
        }
    }
    best[mask] = best_val;
    pick[mask] = static_cast<std::uint8_t>(best_first);
}

Ranking run_rank_default(const Mat& m, std::span<const double> p, bool parallel) {
    check_inputs(m, p, kDefaultRankCap, "rank_default");
    const int n = m.rows;
    detail::DpWorkspace ws;
    Ranking r;
    r.order.resize(n);
    detail::ar_order(m.a.data(), n, p.data(), ws, r.order.data(), parallel);
    r.objective = strict_upper_sum_sq(m, r.order);
    return r;
}

}  // namespace

namespace detail {

void ar_order(const double* m, int n, const double* p, DpWorkspace& ws, int* out_order,
              bool parallel) {
    const std::uint32_t full = (1u << n) - 1u;  // callers cap n well below 32
    ws.best.assign(static_cast<std::size_t>(full) + 1, 0.0);
    ws.pick.assign(static_cast<std::size_t>(full) + 1, 0);
    double* best = ws.best.data();
    std::uint8_t* pick = ws.pick.data();

    for (int a = 0; a < n; ++a) pick[1u << a] = static_cast<std::uint8_t>(a);

    if (!parallel || n < 15) {
        // plain subset order; every proper subset precedes its supersets
        for (std::uint32_t mask = 1; mask <= full; ++mask)
            if ((mask & (mask - 1)) != 0) relax_mask(m, n, p, mask, best, pick);
    } else {
        // level-synchronous: masks of popcount k only read popcount k-1
        // results, so one team sweeps the levels with a barrier between them
        std::vector<std::vector<std::uint32_t>> levels(static_cast<std::size_t>(n) + 1);
        for (std::uint32_t mask = 1; mask <= full; ++mask)
            levels[std::popcount(mask)].push_back(mask);
#ifdef _OPENMP
#pragma omp parallel
#endif
        for (int k = 2; k <= n; ++k) {
            const auto& level = levels[k];
            const std::int64_t count = static_cast<std::int64_t>(level.size());
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (std::int64_t i = 0; i < count; ++i)
                relax_mask(m, n, p, level[static_cast<std::size_t>(i)], best, pick);
        }
    }

    std::uint32_t mask = full;
    for (int pos = 0; pos < n; ++pos) {
        const int a = pick[mask];
        out_order[pos] = a;
        mask &= ~(1u << a);
    }
}

}  // namespace detail

Ranking rank_default(const Mat& m, std::span<const double> p) {
#ifdef _OPENMP
    return run_rank_default(m, p, true);
#else
    return run_rank_default(m, p, false);
#endif
}

Ranking rank_default_serial(const Mat& m, std::span<const double> p) {
    return run_rank_default(m, p, false);
}

namespace {

// Recursive exhaustive search mirroring the prefix tie-break: the candidate
// for subset S with first answer a is a followed by the optimal order of
// S \ {a}, and each candidate's objective is recomputed from scratch.
std::vector<int> brute_order(const Mat& m, std::span<const double> p, std::uint32_t mask) {
    if ((mask & (mask - 1)) == 0) return {std::countr_zero(mask)};
    std::vector<int> best_order;
    double best_val = -1.0;
    int best_first = -1;
    std::uint32_t iter = mask;
    while (iter) {
        const int a = std::countr_zero(iter);
        iter &= iter - 1;
        std::vector<int> candidate{a};
        const std::vector<int> sub = brute_order(m, p, mask & ~(1u << a));
        candidate.insert(candidate.end(), sub.begin(), sub.end());
        const double val = strict_upper_sum_sq(m, candidate);
        if (best_first < 0 || val > best_val || (val == best_val && p[a] > p[best_first])) {
            best_val = val;
            best_first = a;
            best_order = std::move(candidate);
        }
    }
    return best_order;
}

}  // namespace

Ranking rank_brute_force(const Mat& m, std::span<const double> p) {
    check_inputs(m, p, 8, "rank_brute_force");
    Ranking r;
    r.order = brute_order(m, p, (1u << m.rows) - 1u);
    r.objective = strict_upper_sum_sq(m, r.order);
    return r;
}

}  // namespace thinkrank
