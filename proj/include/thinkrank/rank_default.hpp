#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "thinkrank/matrix.hpp"

namespace thinkrank {

/// Requested answer set exceeds an exact-search cap.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultRankCap = 20;  // 2^20 subsets is the largest sane DP

/// A linear order over the answers of a square matrix.
struct Ranking {
    std::vector<int> order;  // rank position -> answer index (position 0 is the top)
    double objective = 0.0;  // Σ_{i<j} M²_{order[i],order[j]}
    double lack_of_fit = std::numeric_limits<double>::quiet_NaN();  // filled by diagnostics
};

/// Finds the order maximizing the strict upper-triangular sum of squares by
/// dynamic programming over answer subsets, O(2^|A|·|A|²). Ties between
/// candidate first answers are broken toward larger p. Runs the subset levels
/// in parallel when OpenMP is available; results are identical either way.
Ranking rank_default(const Mat& m, std::span<const double> p);

/// Reference implementation: same DP walked in plain subset order on one
/// thread. Kept for differential tests and the benchmark.
Ranking rank_default_serial(const Mat& m, std::span<const double> p);

/// Exhaustive oracle: enumerates all |A|! orders recursively, recomputing each
/// candidate objective from scratch (O(|A|!·|A|²)), with the same tie-break
/// applied at each prefix extension. |A| ≤ 8.
Ranking rank_brute_force(const Mat& m, std::span<const double> p);

namespace detail {
struct DpWorkspace {
    std::vector<double> best;
    std::vector<std::uint8_t> pick;
};

/// DP core writing the optimal order into out_order (length n). The caller
/// owns validation. Workspace is reused across calls to avoid reallocation in
/// hot loops (the partition scan ranks one small matrix per candidate).
void ar_order(const double* m, int n, const double* p, DpWorkspace& ws, int* out_order,
              bool parallel);
}  // namespace detail

}  // namespace thinkrank
