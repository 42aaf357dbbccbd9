#include "thinkrank/rank_variant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace thinkrank {

namespace {

void check_inputs(const Mat& m, std::span<const double> p, int cap, const char* what) {
    if (!m.square()) throw std::invalid_argument(std::string(what) + ": matrix is not square");
    if (m.rows == 0) throw std::invalid_argument(std::string(what) + ": empty answer set");
    if (m.rows > cap)
        throw CapExceeded(std::string(what) +
                          ": answer set too large for exact partition search (|A| = " +
                          std::to_string(m.rows) + " > " + std::to_string(cap) + ")");
    if (static_cast<int>(p.size()) != m.rows)
        throw std::invalid_argument(std::string(what) + ": p has " + std::to_string(p.size()) +
                                    " entries, expected " + std::to_string(m.rows));
    for (int i = 0; i < m.rows; ++i)
        if (!(p[i] > 0.0))
            throw std::invalid_argument(std::string(what) + ": p[" + std::to_string(i) +
                                        "] must be strictly positive (frequency ratios undefined)");
}

constexpr int kMaxN = kVariantRankCap;

/// One partition candidate: b[a] is the cluster of answer a (restricted
/// growth string, so cluster ids are 0..k-1 in order of first appearance).
struct Candidate {
    double objective = -1.0;
    int k = 0;
    std::array<std::uint8_t, kMaxN> b{};
    std::array<std::uint8_t, kMaxN> type_order{};  // rank position -> cluster id

    bool beats(const Candidate& other) const {
        // later candidates must win strictly (or with strictly fewer clusters)
        // so that enumeration order settles full ties
        if (objective != other.objective) return objective > other.objective;
        return k < other.k;
    }
};

/// Evaluates one partition: frequency-proportional unit-norm W, compressed
/// matrix Λ̂ = W M Wᵀ, clusters ordered by the default ranking on (Λ̂, p̂) with
/// p̂ the max answer frequency per cluster, objective Σ_{i≤j} Λ̂²_{π(i),π(j)}.
class PartitionScanner {
public:
    PartitionScanner(const Mat& m, std::span<const double> p) : m_(m), p_(p), n_(m.rows) {}

    Candidate evaluate(const std::uint8_t* b, int k) {
        Candidate cand;
        cand.k = k;
        std::copy(b, b + n_, cand.b.begin());

        // within-cluster weights w_a = p_a / sqrt(Σ p²) make W Wᵀ = I
        std::array<double, kMaxN> norm_sq{}, weight{}, p_hat{};
        for (int a = 0; a < n_; ++a) norm_sq[b[a]] += p_[a] * p_[a];
        for (int a = 0; a < n_; ++a) {
            weight[a] = p_[a] / std::sqrt(norm_sq[b[a]]);
            p_hat[b[a]] = std::max(p_hat[b[a]], p_[a]);
        }

        // Λ̂[t][t'] = Σ_{b_a=t, b_g=t'} w_a M[a][g] w_g in one pass over M
        std::array<double, kMaxN * kMaxN> lam{};
        for (int a = 0; a < n_; ++a) {
            const double* row = m_.row(a);
            const int ta = b[a];
            for (int g = 0; g < n_; ++g) lam[ta * k + b[g]] += weight[a] * row[g] * weight[g];
        }

        std::array<int, kMaxN> order{};
        detail::ar_order(lam.data(), k, p_hat.data(), ws_, order.data(), /*parallel=*/false);
        for (int i = 0; i < k; ++i) cand.type_order[i] = static_cast<std::uint8_t>(order[i]);

        double obj = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                const double v = lam[order[i] * k + order[j]];
                obj += v * v;
            }
        cand.objective = obj;
        return cand;
    }

    /// Enumerates all completions of a restricted-growth prefix in
    /// lexicographic order, folding them into `best`.
    void scan_suffixes(std::uint8_t* b, int pos, int max_used, Candidate& best) {
        if (pos == n_) {
            const Candidate cand = evaluate(b, max_used + 1);
            if (best.objective < 0.0 || cand.beats(best)) best = cand;
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            b[pos] = static_cast<std::uint8_t>(c);
            scan_suffixes(b, pos + 1, std::max(max_used, c), best);
        }
    }

private:
    const Mat& m_;
    std::span<const double> p_;
    int n_;
    detail::DpWorkspace ws_;
};

ClusterHierarchy build_result(const Mat& m, std::span<const double> p, const Candidate& best) {
    const int n = m.rows;
    const int k = best.k;
    ClusterHierarchy out;
    out.objective = best.objective;

    // clusters in rank order; answers inside by descending frequency
    out.clusters.resize(k);
    for (int pos = 0; pos < k; ++pos) {
        const int cluster_id = best.type_order[pos];
        for (int a = 0; a < n; ++a)
            if (best.b[a] == cluster_id) out.clusters[pos].push_back(a);
        std::stable_sort(out.clusters[pos].begin(), out.clusters[pos].end(),
                         [&](int x, int y) { return p[x] > p[y]; });
    }

    out.w_unit = Mat(k, n);
    out.w_star = Mat(k, n);
    for (int pos = 0; pos < k; ++pos) {
        double norm_sq = 0.0, total = 0.0;
        for (int a : out.clusters[pos]) {
            norm_sq += p[a] * p[a];
            total += p[a];
        }
        for (int a : out.clusters[pos]) {
            out.w_unit.at(pos, a) = p[a] / std::sqrt(norm_sq);
            out.w_star.at(pos, a) = p[a] / total;
        }
        for (int a : out.clusters[pos]) out.induced_order.push_back(a);
    }
    return out;
}

ClusterHierarchy run_rank_variant(const Mat& m, std::span<const double> p, bool parallel) {
    check_inputs(m, p, kVariantRankCap, "rank_variant");
    const int n = m.rows;

    Candidate best;
    if (!parallel || n <= 7) {
        PartitionScanner scanner(m, p);
        std::uint8_t b[kMaxN] = {0};
        scanner.scan_suffixes(b, 1, 0, best);  // b[0] = 0 always
    } else {
        // split on restricted-growth prefixes; each task scans its suffixes and
        // the prefix-order reduction keeps the result schedule-independent
        constexpr int kPrefixLen = 6;
        std::vector<std::array<std::uint8_t, kPrefixLen>> prefixes;
        std::array<std::uint8_t, kPrefixLen> head{};
        auto gen = [&](auto&& self, int pos, int max_used) -> void {
            if (pos == kPrefixLen) {
                prefixes.push_back(head);
                return;
            }
            for (int c = 0; c <= max_used + 1; ++c) {
                head[pos] = static_cast<std::uint8_t>(c);
                self(self, pos + 1, std::max(max_used, c));
            }
        };
        gen(gen, 1, 0);

        std::vector<Candidate> local(prefixes.size());
        const std::int64_t count = static_cast<std::int64_t>(prefixes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::int64_t i = 0; i < count; ++i) {
            PartitionScanner scanner(m, p);
            std::uint8_t b[kMaxN] = {0};
            int max_used = 0;
            for (int pos = 0; pos < kPrefixLen; ++pos) {
                b[pos] = prefixes[static_cast<std::size_t>(i)][pos];
                max_used = std::max(max_used, static_cast<int>(b[pos]));
            }
            scanner.scan_suffixes(b, kPrefixLen, max_used, local[static_cast<std::size_t>(i)]);
        }
        for (const Candidate& cand : local)
            if (best.objective < 0.0 || cand.beats(best)) best = cand;
    }
    return build_result(m, p, best);
}

}  // namespace

ClusterHierarchy rank_variant(const Mat& m, std::span<const double> p) {
#ifdef _OPENMP
    return run_rank_variant(m, p, true);
#else
    return run_rank_variant(m, p, false);
#endif
}

ClusterHierarchy rank_variant_serial(const Mat& m, std::span<const double> p) {
    return run_rank_variant(m, p, false);
}

namespace {

/// Independent partition generator for the oracle: grows explicit block lists
/// instead of growth strings.
void enumerate_partitions(int n, int next, std::vector<std::vector<int>>& blocks,
                          const std::function<void(const std::vector<std::vector<int>>&)>& emit) {
    if (next == n) {
        emit(blocks);
        return;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        blocks[i].push_back(next);
        enumerate_partitions(n, next + 1, blocks, emit);
        blocks[i].pop_back();
    }
    blocks.push_back({next});
    enumerate_partitions(n, next + 1, blocks, emit);
    blocks.pop_back();
}

}  // namespace

ClusterHierarchy variant_brute_force(const Mat& m, std::span<const double> p) {
    check_inputs(m, p, 6, "variant_brute_force");
    const int n = m.rows;

    double best_obj = -1.0;
    int best_k = 0;
    std::vector<std::vector<int>> best_blocks;  // already in the winning order

    std::vector<std::vector<int>> blocks;
    enumerate_partitions(n, 0, blocks, [&](const std::vector<std::vector<int>>& partition) {
        const int k = static_cast<int>(partition.size());
        std::vector<int> perm(k);
        for (int i = 0; i < k; ++i) perm[i] = i;
        do {
            // build W rows in this cluster order and take the generic product
            Mat w(k, n);
            for (int pos = 0; pos < k; ++pos) {
                double norm_sq = 0.0;
                for (int a : partition[perm[pos]]) norm_sq += p[a] * p[a];
                for (int a : partition[perm[pos]]) w.at(pos, a) = p[a] / std::sqrt(norm_sq);
            }
            const Mat compressed = congruence(w, m);
            const double obj = upper_sum_sq(compressed, /*include_diagonal=*/true);
            if (obj > best_obj || (obj == best_obj && k < best_k)) {
                best_obj = obj;
                best_k = k;
                best_blocks.clear();
                for (int pos = 0; pos < k; ++pos) best_blocks.push_back(partition[perm[pos]]);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    });

    ClusterHierarchy out;
    out.objective = best_obj;
    out.clusters = best_blocks;
    for (auto& cluster : out.clusters)
        std::stable_sort(cluster.begin(), cluster.end(), [&](int x, int y) { return p[x] > p[y]; });
    out.w_unit = Mat(best_k, n);
    out.w_star = Mat(best_k, n);
    for (int pos = 0; pos < best_k; ++pos) {
        double norm_sq = 0.0, total = 0.0;
        for (int a : out.clusters[pos]) {
            norm_sq += p[a] * p[a];
            total += p[a];
        }
        for (int a : out.clusters[pos]) {
            out.w_unit.at(pos, a) = p[a] / std::sqrt(norm_sq);
            out.w_star.at(pos, a) = p[a] / total;
        }
        for (int a : out.clusters[pos]) out.induced_order.push_back(a);
    }
    return out;
}

}  // namespace thinkrank
