#include "thinkrank/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace thinkrank {

namespace {

FitReport fit_at(const Mat& m, const Mat& w) {
    if (w.cols != m.rows)
        throw std::invalid_argument("lack_of_fit: W has " + std::to_string(w.cols) +
                                    " columns, expected " + std::to_string(m.rows));
    const Mat lambda = upper_part(congruence(w, m));
    const Mat rec = matmul(matmul(transpose(w), lambda), w);
    FitReport report;
    report.residual = Mat(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) report.residual.a[i] = m.a[i] - rec.a[i];
    report.raw = frobenius_sq(report.residual);
    const double scale = frobenius_sq(m);
    report.normalized = scale > 0.0 ? report.raw / scale : 0.0;
    return report;
}

}  // namespace

FitReport lack_of_fit(const Mat& m, const std::vector<int>& order) {
    if (!m.square() || static_cast<int>(order.size()) != m.rows)
        throw std::invalid_argument("lack_of_fit: order length does not match the matrix");
    Mat w(m.rows, m.rows);
    for (int pos = 0; pos < m.rows; ++pos) w.at(pos, order[pos]) = 1.0;
    return fit_at(m, w);
}

FitReport lack_of_fit(const Mat& m, const Mat& w_unit) { return fit_at(m, w_unit); }

double lack_of_fit_identity_check(const Mat& m, const Mat& w) {
    if (!m.square() || w.cols != m.rows)
        throw std::invalid_argument("lack_of_fit_identity_check: dimension mismatch");
    const Mat gram = matmul(w, transpose(w));
    for (int i = 0; i < gram.rows; ++i)
        for (int j = 0; j < gram.cols; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(gram.at(i, j) - want) > 1e-12)
                throw std::invalid_argument("lack_of_fit_identity_check: w is not semi-orthogonal");
        }
    const double lhs = fit_at(m, w).raw;
    const double rhs = frobenius_sq(m) - upper_sum_sq(congruence(w, m), /*include_diagonal=*/true);
    return std::abs(lhs - rhs);
}

std::string plurality(const AnswerPredictionMatrix& matrix) {
    if (matrix.answers.empty()) throw std::invalid_argument("plurality: empty answer set");
    int best = 0;
    for (int i = 1; i < matrix.size(); ++i) {
        if (matrix.support[i] > matrix.support[best] ||
            (matrix.support[i] == matrix.support[best] && matrix.answers[i] < matrix.answers[best]))
            best = i;
    }
    return matrix.answers[best];
}

std::vector<double> answer_frequencies(const AnswerPredictionMatrix& matrix, PSource source) {
    if (source == PSource::support) return matrix.support_frequencies();
    std::vector<double> p(matrix.answers.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < matrix.counts.size(); ++i)
        for (std::int64_t c : matrix.counts[i]) {
            p[i] += static_cast<double>(c);
            total += static_cast<double>(c);
        }
    if (total > 0.0)
        for (double& v : p) v /= total;
    return p;
}

namespace {

QuestionResult evaluate_one(const QuestionInput& q, const EvalConfig& config) {
    QuestionResult result;
    result.question_id = q.question_id;
    if (q.truth) result.truth = canonicalize(*q.truth, config.canon);
    try {
        const AnswerPredictionMatrix matrix =
            build_matrix(q.records, config.canon, config.threshold, config.dont_know_token,
                         config.policy);
        result.plurality_answer = plurality(matrix);
        const Mat counts = matrix.counts_mat();
        const std::vector<double> p = answer_frequencies(matrix, config.p_source);

        if (config.algorithm != AlgorithmChoice::variant_only) {
            if (matrix.size() > config.cap_default)
                throw CapExceeded("rank_default: answer set too large for exact search (|A| = " +
                                  std::to_string(matrix.size()) + " > " +
                                  std::to_string(config.cap_default) + ")");
            const Ranking ranking = rank_default(counts, p);
            result.default_top = matrix.answers[ranking.order[0]];
            const FitReport fit = lack_of_fit(counts, ranking.order);
            result.lack_of_fit_raw = fit.raw;
            result.lack_of_fit_normalized = fit.normalized;
        }

        if (config.algorithm != AlgorithmChoice::default_only) {
            if (matrix.size() > config.cap_variant) {
                result.variant_note = "variant skipped: |A| = " + std::to_string(matrix.size()) +
                                      " exceeds cap " + std::to_string(config.cap_variant);
            } else {
                const ClusterHierarchy hierarchy = rank_variant(counts, p);
                // top answer of the top-ranking type: the most supported one
                int top = -1;
                for (int a : hierarchy.clusters.front()) {
                    if (top < 0 || matrix.support[a] > matrix.support[top] ||
                        (matrix.support[a] == matrix.support[top] &&
                         matrix.answers[a] < matrix.answers[top]))
                        top = a;
                }
                result.variant_top = matrix.answers[top];
            }
        }
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

}  // namespace

EvalResult evaluate(const std::vector<QuestionInput>& questions, const EvalConfig& config) {
    EvalResult result;
    result.questions.resize(questions.size());

    const std::int64_t count = static_cast<std::int64_t>(questions.size());
#ifdef _OPENMP
    const int jobs = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (std::int64_t i = 0; i < count; ++i)
        result.questions[static_cast<std::size_t>(i)] =
            evaluate_one(questions[static_cast<std::size_t>(i)], config);

    EvalAggregates& agg = result.aggregates;
    agg.n_questions = static_cast<int>(questions.size());
    double lof_correct = 0.0, lof_incorrect = 0.0;
    for (const QuestionResult& q : result.questions) {
        if (q.error) {
            ++agg.n_errors;
            continue;
        }
        if (!q.truth) continue;
        ++agg.n_with_truth;
        if (q.plurality_answer == *q.truth) ++agg.correct_plurality;
        if (q.default_top && *q.default_top == *q.truth) ++agg.correct_default;
        if (q.variant_top && *q.variant_top == *q.truth) ++agg.correct_variant;
        if (q.default_top) {
            if (*q.default_top == *q.truth) {
                lof_correct += q.lack_of_fit_normalized;
                ++agg.n_lof_correct;
            } else {
                lof_incorrect += q.lack_of_fit_normalized;
                ++agg.n_lof_incorrect;
            }
        }
    }
    if (agg.n_lof_correct > 0) agg.mean_lof_correct = lof_correct / agg.n_lof_correct;
    if (agg.n_lof_incorrect > 0) agg.mean_lof_incorrect = lof_incorrect / agg.n_lof_incorrect;
    return result;
}

}  // namespace thinkrank
