#include "thinkrank/reports.hpp"

#include "json.hpp"

namespace thinkrank {

using ordered_json = nlohmann::ordered_json;

std::string rank_report_json(const RankReportInputs& in) {
    ordered_json j;
    j["answers"] = in.answers;

    if (in.ranking) {
        ordered_json order = ordered_json::array();
        for (int idx : in.ranking->order) order.push_back(in.answers[idx]);
        j["order_default"] = std::move(order);
    } else {
        j["order_default"] = nullptr;
    }

    if (in.hierarchy) {
        ordered_json hj;
        ordered_json clusters = ordered_json::array();
        for (int pos = 0; pos < in.hierarchy->cluster_count(); ++pos) {
            ordered_json cj = ordered_json::array();
            for (int a : in.hierarchy->clusters[pos]) {
                ordered_json entry;
                entry["answer"] = in.answers[a];
                entry["weight"] = in.hierarchy->w_star.at(pos, a);
                cj.push_back(std::move(entry));
            }
            clusters.push_back(std::move(cj));
        }
        hj["clusters"] = std::move(clusters);
        ordered_json order = ordered_json::array();
        for (int a : in.hierarchy->induced_order) order.push_back(in.answers[a]);
        hj["order"] = std::move(order);
        hj["objective"] = in.hierarchy->objective;
        j["clusters_variant"] = std::move(hj);
    } else {
        j["clusters_variant"] = nullptr;
    }

    if (in.ranking) {
        j["objective"] = in.ranking->objective;
    } else {
        j["objective"] = nullptr;
    }
    if (in.fit) {
        j["lack_of_fit_raw"] = in.fit->raw;
        j["lack_of_fit_normalized"] = in.fit->normalized;
    } else {
        j["lack_of_fit_raw"] = nullptr;
        j["lack_of_fit_normalized"] = nullptr;
    }
    j["plurality"] = in.plurality_answer;
    j["dropped_predictions"] = in.dropped_predictions;
    return j.dump(2) + "\n";
}

std::string heatmap_json(const AnswerPredictionMatrix& matrix, const Ranking& ranking,
                         DisplayDiagonal diagonal) {
    ordered_json j;
    ordered_json answers = ordered_json::array();
    for (int idx : ranking.order) answers.push_back(matrix.answers[idx]);
    j["answers"] = std::move(answers);
    ordered_json grid = ordered_json::array();
    const int n = matrix.size();
    for (int i = 0; i < n; ++i) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < n; ++k) {
            if (i == k && diagonal == DisplayDiagonal::support)
                row.push_back(matrix.support[ranking.order[i]]);
            else
                row.push_back(matrix.counts[ranking.order[i]][ranking.order[k]]);
        }
        grid.push_back(std::move(row));
    }
    j["grid"] = std::move(grid);
    j["diagonal"] = diagonal == DisplayDiagonal::support ? "support" : "raw";
    return j.dump(2) + "\n";
}

std::string eval_report_json(const EvalResult& result) {
    ordered_json j;
    j["schema"] = "eval/1";
    ordered_json questions = ordered_json::array();
    for (const QuestionResult& q : result.questions) {
        ordered_json qj;
        qj["question_id"] = q.question_id;
        if (q.error) {
            qj["error"] = *q.error;
        } else {
            qj["plurality"] = q.plurality_answer;
            qj["default_top"] = q.default_top ? ordered_json(*q.default_top) : ordered_json(nullptr);
            qj["variant_top"] = q.variant_top ? ordered_json(*q.variant_top) : ordered_json(nullptr);
            qj["truth"] = q.truth ? ordered_json(*q.truth) : ordered_json(nullptr);
            qj["lack_of_fit_raw"] = q.lack_of_fit_raw;
            qj["lack_of_fit_normalized"] = q.lack_of_fit_normalized;
            if (q.variant_note) qj["variant_note"] = *q.variant_note;
        }
        questions.push_back(std::move(qj));
    }
    j["questions"] = std::move(questions);

    const EvalAggregates& agg = result.aggregates;
    ordered_json aj;
    aj["n_questions"] = agg.n_questions;
    aj["n_errors"] = agg.n_errors;
    aj["n_with_truth"] = agg.n_with_truth;
    ordered_json correct;
    correct["plurality"] = agg.correct_plurality;
    correct["default"] = agg.correct_default;
    correct["variant"] = agg.correct_variant;
    aj["correct"] = std::move(correct);
    if (agg.n_with_truth > 0) {
        ordered_json accuracy;
        accuracy["plurality"] = static_cast<double>(agg.correct_plurality) / agg.n_with_truth;
        accuracy["default"] = static_cast<double>(agg.correct_default) / agg.n_with_truth;
        accuracy["variant"] = static_cast<double>(agg.correct_variant) / agg.n_with_truth;
        aj["accuracy"] = std::move(accuracy);
    } else {
        aj["accuracy"] = nullptr;
    }
    ordered_json lof;
    lof["mean_normalized_correct"] =
        agg.n_lof_correct > 0 ? ordered_json(agg.mean_lof_correct) : ordered_json(nullptr);
    lof["mean_normalized_incorrect"] =
        agg.n_lof_incorrect > 0 ? ordered_json(agg.mean_lof_incorrect) : ordered_json(nullptr);
    lof["n_correct"] = agg.n_lof_correct;
    lof["n_incorrect"] = agg.n_lof_incorrect;
    aj["lack_of_fit"] = std::move(lof);
    j["aggregates"] = std::move(aj);
    return j.dump(2) + "\n";
}

}  // namespace thinkrank
