#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thinkrank/canonicalize.hpp"
#include "thinkrank/matrix.hpp"
#include "thinkrank/model.hpp"
#include "thinkrank/records.hpp"

namespace thinkrank {

enum class PredictionPolicy { all, first_only };

/// Square count matrix over the retained answer set of one question.
/// counts[a][g] = number of (answer a, prediction g) pairs; support[a] = number
/// of respondents answering a, independent of predictions.
struct AnswerPredictionMatrix {
    std::vector<std::string> answers;             // support desc, ties lexicographic
    std::vector<std::vector<std::int64_t>> counts;
    std::vector<std::int64_t> support;
    std::int64_t n_respondents = 0;               // includes don't-know respondents
    std::int64_t dropped_predictions = 0;         // predictions outside the retained set

    int size() const { return static_cast<int>(answers.size()); }
    Mat counts_mat() const;
    /// support / Σ support — the empirical answer frequencies used for tie-breaks.
    std::vector<double> support_frequencies() const;
};

/// Tabulates one question's records:
///  - canonicalizes answers and predictions,
///  - excludes don't-know answers from the answer set (still counted in
///    n_respondents),
///  - retains answers with support > 1 and support fraction > threshold
///    (strictly, over answering respondents),
///  - drops predictions that do not canonicalize to a retained answer.
/// Throws if the records span multiple question ids or nothing survives.
AnswerPredictionMatrix build_matrix(const std::vector<ResponseRecord>& records,
                                    const CanonicalizationMap& map, double threshold,
                                    const std::string& dont_know_token, PredictionPolicy policy);

/// Counts divided by their total; errors when no predictions were recorded.
JointMatrix normalize(const AnswerPredictionMatrix& matrix);

/// Matrix JSON:
/// { "answers": [...], "counts": [[...]], "support": [...], "n_respondents": N }
std::string matrix_to_json(const AnswerPredictionMatrix& matrix);
AnswerPredictionMatrix matrix_from_json_text(const std::string& text);

}  // namespace thinkrank
