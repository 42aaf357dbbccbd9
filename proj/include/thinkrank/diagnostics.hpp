#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thinkrank/canonicalize.hpp"
#include "thinkrank/matrix.hpp"
#include "thinkrank/rank_default.hpp"
#include "thinkrank/rank_variant.hpp"
#include "thinkrank/records.hpp"
#include "thinkrank/tabulate.hpp"

namespace thinkrank {

/// Frobenius residual of the triangular decomposition at a given solution.
struct FitReport {
    double raw = 0.0;         // ‖M − WᵀΛW‖²_F with Λ = Up(W M Wᵀ)
    double normalized = 0.0;  // raw / ‖M‖²_F
    Mat residual;             // M − WᵀΛW
};

/// Permutation solution: W is the order's permutation matrix, so raw equals
/// the strict-lower-triangle sum of squares of the reordered matrix.
FitReport lack_of_fit(const Mat& m, const std::vector<int>& order);

/// Clustered solution: w is the unit-norm semi-orthogonal matrix.
FitReport lack_of_fit(const Mat& m, const Mat& w_unit);

/// Checks the algebraic identity
///   ‖M − WᵀΛ*W‖²_F = ‖M‖²_F − Σ_{i≤j}(W M Wᵀ)²_{i,j},  Λ* = Up(W M Wᵀ),
/// returning the absolute discrepancy between both sides. Throws when w is
/// not semi-orthogonal (W Wᵀ = I within 1e-12).
double lack_of_fit_identity_check(const Mat& m, const Mat& w);

/// Answer with maximal support; ties broken lexicographically.
std::string plurality(const AnswerPredictionMatrix& matrix);

enum class PSource { support, row_sum };
enum class AlgorithmChoice { default_only, variant_only, both };

/// Per-answer frequencies fed to the rankers: respondent support shares by
/// default, or normalized count-matrix row sums (prediction volume).
std::vector<double> answer_frequencies(const AnswerPredictionMatrix& matrix, PSource source);

struct EvalConfig {
    double threshold = 0.03;
    std::string dont_know_token = "IDK";
    PredictionPolicy policy = PredictionPolicy::all;
    PSource p_source = PSource::support;
    AlgorithmChoice algorithm = AlgorithmChoice::both;
    int cap_default = kDefaultRankCap;
    int cap_variant = kVariantRankCap;
    int jobs = 0;  // 0 = library default
    CanonicalizationMap canon;
};

struct QuestionInput {
    std::string question_id;
    std::vector<ResponseRecord> records;
    std::optional<std::string> truth;
};

struct QuestionResult {
    std::string question_id;
    std::optional<std::string> error;  // ingest/rank failure; question skipped
    std::string plurality_answer;
    std::optional<std::string> default_top;
    std::optional<std::string> variant_top;
    std::optional<std::string> truth;
    double lack_of_fit_raw = 0.0;
    double lack_of_fit_normalized = 0.0;
    std::optional<std::string> variant_note;  // e.g. skipped by cap
};

struct EvalAggregates {
    int n_questions = 0;
    int n_errors = 0;
    int n_with_truth = 0;
    int correct_plurality = 0;
    int correct_default = 0;
    int correct_variant = 0;
    // lack-of-fit split by default-algorithm correctness (questions with truth)
    double mean_lof_correct = 0.0;
    double mean_lof_incorrect = 0.0;
    int n_lof_correct = 0;
    int n_lof_incorrect = 0;
};

struct EvalResult {
    std::vector<QuestionResult> questions;  // manifest order
    EvalAggregates aggregates;
};

/// Runs ingest → plurality → both rankers per question. Questions are
/// independent and processed in parallel up to config.jobs; per-question
/// failures are recorded, not fatal. The variant's top answer is the
/// most-supported answer inside its top-ranking cluster.
EvalResult evaluate(const std::vector<QuestionInput>& questions, const EvalConfig& config);

}  // namespace thinkrank
