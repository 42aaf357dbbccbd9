#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thinkrank/matrix.hpp"

namespace thinkrank {

/// Tolerance for probability normalization checks on hand-authored inputs.
inline constexpr double kProbTol = 1e-12;

/// Distribution over the number of predictions a respondent emits.
/// probs[k] = P(k predictions).
struct PredictionCountDist {
    std::vector<double> probs = {0.0, 1.0};  // point mass at 1

    static PredictionCountDist point(int k);
    static PredictionCountDist categorical(std::vector<double> probs);
    void validate() const;
    int max_count() const { return static_cast<int>(probs.size()) - 1; }
};

/// The latent generative model: per-type answer oracles W, the joint
/// (type, predicted-type) weights Λ, and the prediction-count distribution.
///
/// Types are stored in an order that makes Λ upper-triangular: row sums of Λ
/// are the type marginals p_t, and Λ_{t,t'} = p_t · p_{t→t'}.
struct ThinkingModel {
    std::vector<std::string> answers;
    std::vector<std::string> types;
    Mat w;       // |T| x |A|, row t is the output distribution of oracle t
    Mat lambda;  // |T| x |T|, non-negative upper-triangular, entries sum to 1
    PredictionCountDist prediction_count;

    /// Throws std::invalid_argument naming the violated field and index.
    void validate() const;

    std::vector<double> type_marginals() const;    // p_t, the t-th row sum of lambda
    std::vector<double> answer_marginals() const;  // p_a = Σ_t p_t w_t(a)
};

/// Joint distribution over one respondent's (answer, prediction) pair.
struct JointMatrix {
    std::vector<std::string> answers;
    Mat m;  // m[a][g] = P(answer a, prediction g); entries sum to 1
};

/// M = Wᵀ Λ W. Validates the model first.
JointMatrix compute_joint(const ThinkingModel& model);

/// Model file (JSON):
/// { "answers": [...], "types": [...], "w": [[...]], "lambda": [[...]],
///   "prediction_count": {"kind":"point","value":1}
///                     | {"kind":"categorical","probs":{"0":0.2,"1":0.8}} }
ThinkingModel model_from_json_text(const std::string& text);
ThinkingModel load_model(const std::string& path);
std::string model_to_json(const ThinkingModel& model);

}  // namespace thinkrank
