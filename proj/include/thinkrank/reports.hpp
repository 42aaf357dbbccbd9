#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thinkrank/diagnostics.hpp"

namespace thinkrank {

enum class DisplayDiagonal { raw, support };

/// Everything the rank report needs; the CLI fills this from either input
/// format and the acceptance suite byte-compares two independent runs.
struct RankReportInputs {
    std::vector<std::string> answers;
    std::optional<Ranking> ranking;            // default algorithm, if run
    std::optional<FitReport> fit;              // lack of fit at the default order
    std::optional<ClusterHierarchy> hierarchy; // variant algorithm, if run
    std::string plurality_answer;
    std::int64_t dropped_predictions = 0;
};

/// { "answers", "order_default", "clusters_variant", "objective",
///   "lack_of_fit_raw", "lack_of_fit_normalized", "plurality",
///   "dropped_predictions" } — keys and array orders are stable so the output
/// is byte-identical across runs.
std::string rank_report_json(const RankReportInputs& in);

/// The count matrix reordered by the default ranking, for heatmap plotting.
/// Under DisplayDiagonal::support, cell (a,a) shows the support count instead
/// of the raw self-prediction count (display only).
std::string heatmap_json(const AnswerPredictionMatrix& matrix, const Ranking& ranking,
                         DisplayDiagonal diagonal);

/// Evaluation report, schema "eval/1": per-question records in manifest order
/// plus aggregate accuracy counts.
std::string eval_report_json(const EvalResult& result);

}  // namespace thinkrank
