#pragma once

#include <span>
#include <vector>

#include "thinkrank/matrix.hpp"
#include "thinkrank/rank_default.hpp"

namespace thinkrank {

inline constexpr int kVariantRankCap = 12;  // Bell(12) ≈ 4.2e6 partitions

/// An ordered hard clustering of answers into types, with per-answer weights.
struct ClusterHierarchy {
    /// cluster rank -> answer indices, largest weight first (position 0 is the
    /// top-ranking type).
    std::vector<std::vector<int>> clusters;
    Mat w_unit;  // |T| x |A|, rows unit Euclidean norm; W Wᵀ = I
    Mat w_star;  // |T| x |A|, rows sum to 1
    double objective = 0.0;  // Σ_{i≤j} (W M Wᵀ)²_{i,j} at w_unit
    std::vector<int> induced_order;  // clusters flattened in rank order

    int cluster_count() const { return static_cast<int>(clusters.size()); }
};

/// Enumerates all set partitions of the answers (restricted-growth strings in
/// lexicographic order), builds the frequency-proportional semi-orthogonal W
/// for each, orders its clusters with the default ranking algorithm, and keeps
/// the candidate maximizing Σ_{i≤j} (W M Wᵀ)². Objective ties prefer fewer
/// clusters, then earlier enumeration order. Partition candidates are scanned
/// in parallel when OpenMP is available with a deterministic reduction.
ClusterHierarchy rank_variant(const Mat& m, std::span<const double> p);

/// Reference implementation: the same scan on one thread in plain
/// enumeration order.
ClusterHierarchy rank_variant_serial(const Mat& m, std::span<const double> p);

/// Exhaustive oracle: independently enumerates partitions AND all cluster
/// orderings (not just the AR-chosen one), maximizing the same objective via
/// generic matrix products. |A| ≤ 6.
ClusterHierarchy variant_brute_force(const Mat& m, std::span<const double> p);

}  // namespace thinkrank
