#include "thinkrank/tabulate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace thinkrank {

using ordered_json = nlohmann::ordered_json;

Mat AnswerPredictionMatrix::counts_mat() const {
    const int n = size();
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = static_cast<double>(counts[i][j]);
    return m;
}

std::vector<double> AnswerPredictionMatrix::support_frequencies() const {
    std::int64_t total = 0;
    for (std::int64_t s : support) total += s;
    std::vector<double> p(support.size(), 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
        p[i] = static_cast<double>(support[i]) / static_cast<double>(total);
    return p;
}

AnswerPredictionMatrix build_matrix(const std::vector<ResponseRecord>& records,
                                    const CanonicalizationMap& map, double threshold,
                                    const std::string& dont_know_token, PredictionPolicy policy) {
    if (!(threshold >= 0.0 && threshold < 1.0))
        throw std::invalid_argument("threshold must be in [0, 1)");
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].question_id != records[0].question_id)
            throw std::invalid_argument("mixed question ids: '" + records[0].question_id + "' vs '" +
                                        records[i].question_id + "'");

    const std::string dk = canonicalize(dont_know_token, map);

    // canonical answer per record; don't-know answers stay out of the support
    // tallies but count toward n_respondents
    std::vector<std::string> canon_answer(records.size());
    std::map<std::string, std::int64_t> tally;  // ordered: deterministic iteration
    std::int64_t answering = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        canon_answer[i] = canonicalize(records[i].answer, map);
        if (canon_answer[i] == dk) continue;
        ++tally[canon_answer[i]];
        ++answering;
    }

    // retention: more than one person AND strictly above the threshold fraction
    std::vector<std::pair<std::string, std::int64_t>> retained;
    for (const auto& [answer, support] : tally) {
        if (support <= 1) continue;
        if (answering > 0 &&
            static_cast<double>(support) / static_cast<double>(answering) <= threshold)
            continue;
        retained.emplace_back(answer, support);
    }
    if (retained.empty()) throw std::runtime_error("no answer survives threshold");

    std::sort(retained.begin(), retained.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });

    AnswerPredictionMatrix out;
    out.n_respondents = static_cast<std::int64_t>(records.size());
    std::unordered_map<std::string, int> index;
    for (const auto& [answer, support] : retained) {
        index.emplace(answer, static_cast<int>(out.answers.size()));
        out.answers.push_back(answer);
        out.support.push_back(support);
    }
    const int n = out.size();
    out.counts.assign(n, std::vector<std::int64_t>(n, 0));

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto ia = index.find(canon_answer[i]);
        if (ia == index.end()) continue;  // don't-know or below threshold
        bool counted = false;
        for (const std::string& raw : records[i].predictions) {
            const auto ig = index.find(canonicalize(raw, map));
            if (ig == index.end()) {
                ++out.dropped_predictions;
                continue;
            }
            if (policy == PredictionPolicy::first_only && counted) continue;
            ++out.counts[ia->second][ig->second];
            counted = true;
        }
    }
    return out;
}

JointMatrix normalize(const AnswerPredictionMatrix& matrix) {
    const int n = matrix.size();
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) total += matrix.counts[i][j];
    if (total == 0) throw std::runtime_error("no predictions recorded");
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = static_cast<double>(matrix.counts[i][j]) / static_cast<double>(total);
    return JointMatrix{matrix.answers, std::move(m)};
}

std::string matrix_to_json(const AnswerPredictionMatrix& matrix) {
    ordered_json j;
    j["answers"] = matrix.answers;
    j["counts"] = matrix.counts;
    j["support"] = matrix.support;
    j["n_respondents"] = matrix.n_respondents;
    return j.dump(2) + "\n";
}

AnswerPredictionMatrix matrix_from_json_text(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    for (const char* field : {"answers", "counts", "support", "n_respondents"})
        if (!j.contains(field)) throw std::invalid_argument(std::string(field) + ": missing field");

    AnswerPredictionMatrix out;
    const auto& answers = j.at("answers");
    if (!answers.is_array() || answers.empty())
        throw std::invalid_argument("answers: expected a non-empty array");
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (!answers[i].is_string())
            throw std::invalid_argument("answers[" + std::to_string(i) + "]: not a string");
        out.answers.push_back(answers[i].get<std::string>());
    }
    const int n = out.size();

    const auto& counts = j.at("counts");
    if (!counts.is_array() || static_cast<int>(counts.size()) != n)
        throw std::invalid_argument("counts: expected " + std::to_string(n) + " rows");
    out.counts.assign(n, std::vector<std::int64_t>(n, 0));
    for (int r = 0; r < n; ++r) {
        if (!counts[r].is_array() || static_cast<int>(counts[r].size()) != n)
            throw std::invalid_argument("counts[" + std::to_string(r) + "]: expected " +
                                        std::to_string(n) + " entries");
        for (int c = 0; c < n; ++c) {
            if (!counts[r][c].is_number_integer() || counts[r][c].get<std::int64_t>() < 0)
                throw std::invalid_argument("counts[" + std::to_string(r) + "][" + std::to_string(c) +
                                            "]: expected a non-negative integer");
            out.counts[r][c] = counts[r][c].get<std::int64_t>();
        }
    }

    const auto& support = j.at("support");
    if (!support.is_array() || static_cast<int>(support.size()) != n)
        throw std::invalid_argument("support: expected " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i) {
        if (!support[i].is_number_integer() || support[i].get<std::int64_t>() < 0)
            throw std::invalid_argument("support[" + std::to_string(i) +
                                        "]: expected a non-negative integer");
        out.support.push_back(support[i].get<std::int64_t>());
    }

    if (!j.at("n_respondents").is_number_integer())
        throw std::invalid_argument("n_respondents: expected an integer");
    out.n_respondents = j.at("n_respondents").get<std::int64_t>();
    return out;
}

}  // namespace thinkrank
