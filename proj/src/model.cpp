#include "thinkrank/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace thinkrank {

using ordered_json = nlohmann::ordered_json;

PredictionCountDist PredictionCountDist::point(int k) {
    if (k < 0) throw std::invalid_argument("prediction_count: value must be >= 0");
    PredictionCountDist d;
    d.probs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    d.probs[k] = 1.0;
    return d;
}

PredictionCountDist PredictionCountDist::categorical(std::vector<double> probs) {
    PredictionCountDist d;
    d.probs = std::move(probs);
    d.validate();
    return d;
}

void PredictionCountDist::validate() const {
    if (probs.empty()) throw std::invalid_argument("prediction_count: empty distribution");
    double total = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] < 0.0)
            throw std::invalid_argument("prediction_count[" + std::to_string(k) + "]: negative probability");
        total += probs[k];
    }
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument("prediction_count: probabilities sum to " + std::to_string(total) +
                                    ", expected 1");
}

std::vector<double> ThinkingModel::type_marginals() const { return row_sums(lambda); }

std::vector<double> ThinkingModel::answer_marginals() const {
    const std::vector<double> pt = type_marginals();
    std::vector<double> pa(answers.size(), 0.0);
    for (int t = 0; t < w.rows; ++t)
        for (int a = 0; a < w.cols; ++a) pa[a] += pt[t] * w.at(t, a);
    return pa;
}

void ThinkingModel::validate() const {
    const int nt = static_cast<int>(types.size());
    const int na = static_cast<int>(answers.size());
    if (na == 0) throw std::invalid_argument("answers: empty");
    if (nt == 0) throw std::invalid_argument("types: empty");
    if (w.rows != nt || w.cols != na)
        throw std::invalid_argument("w: expected " + std::to_string(nt) + "x" + std::to_string(na) +
                                    ", got " + std::to_string(w.rows) + "x" + std::to_string(w.cols));
    if (lambda.rows != nt || lambda.cols != nt)
        throw std::invalid_argument("lambda: expected " + std::to_string(nt) + "x" + std::to_string(nt) +
                                    ", got " + std::to_string(lambda.rows) + "x" +
                                    std::to_string(lambda.cols));

    for (int t = 0; t < nt; ++t) {
        double row = 0.0;
        for (int a = 0; a < na; ++a) {
            if (w.at(t, a) < 0.0)
                throw std::invalid_argument("w[" + std::to_string(t) + "][" + std::to_string(a) +
                                            "]: negative entry");
            row += w.at(t, a);
        }
        if (std::abs(row - 1.0) > kProbTol)
            throw std::invalid_argument("w[" + std::to_string(t) + "]: row sums to " +
                                        std::to_string(row) + ", expected 1");
    }

    double total = 0.0;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < nt; ++j) {
            const double v = lambda.at(i, j);
            if (v < 0.0)
                throw std::invalid_argument("lambda[" + std::to_string(i) + "][" + std::to_string(j) +
                                            "]: negative entry");
            if (i > j && v != 0.0)
                throw std::invalid_argument("lambda[" + std::to_string(i) + "][" + std::to_string(j) +
                                            "]: must be 0 below the diagonal (store types in "
                                            "hierarchy order)");
            total += v;
        }
    if (std::abs(total - 1.0) > kProbTol)
        throw std::invalid_argument("lambda: entries sum to " + std::to_string(total) + ", expected 1");

    const std::vector<double> pa = answer_marginals();
    for (int a = 0; a < na; ++a)
        if (!(pa[a] > 0.0))
            throw std::invalid_argument("answers[" + std::to_string(a) + "] ('" + answers[a] +
                                        "'): zero marginal probability");

    prediction_count.validate();
}

JointMatrix compute_joint(const ThinkingModel& model) {
    model.validate();
    // M = Wᵀ Λ W, computed as Wᵀ (Λ W)
    const Mat lw = matmul(model.lambda, model.w);
    Mat m(model.w.cols, model.w.cols);
    for (int t = 0; t < model.w.rows; ++t)
        for (int a = 0; a < model.w.cols; ++a) {
            const double wta = model.w.at(t, a);
            if (wta == 0.0) continue;
            for (int g = 0; g < model.w.cols; ++g) m.at(a, g) += wta * lw.at(t, g);
        }
    return JointMatrix{model.answers, std::move(m)};
}

namespace {

Mat mat_from_json(const ordered_json& j, const std::string& field, int rows, int cols) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw std::invalid_argument(field + ": expected " + std::to_string(rows) + " rows");
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument(field + "[" + std::to_string(r) + "]: expected " +
                                        std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw std::invalid_argument(field + "[" + std::to_string(r) + "][" +
                                            std::to_string(c) + "]: not a number");
            m.at(r, c) = row[c].get<double>();
        }
    }
    return m;
}

std::vector<std::string> labels_from_json(const ordered_json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(field + ": expected a non-empty array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string())
            throw std::invalid_argument(field + "[" + std::to_string(i) + "]: not a string");
        out.push_back(j[i].get<std::string>());
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t k = i + 1; k < out.size(); ++k)
            if (out[i] == out[k])
                throw std::invalid_argument(field + "[" + std::to_string(k) + "]: duplicate label '" +
                                            out[k] + "'");
    return out;
}

PredictionCountDist pcount_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("prediction_count: expected an object with a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point") {
        if (!j.contains("value") || !j.at("value").is_number_integer())
            throw std::invalid_argument("prediction_count.value: expected an integer");
        return PredictionCountDist::point(j.at("value").get<int>());
    }
    if (kind == "categorical") {
        if (!j.contains("probs") || !j.at("probs").is_object())
            throw std::invalid_argument("prediction_count.probs: expected an object");
        int max_k = 0;
        for (const auto& [key, _] : j.at("probs").items()) {
            std::size_t pos = 0;
            int k = 0;
            try {
                k = std::stoi(key, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != key.size() || k < 0)
                throw std::invalid_argument("prediction_count.probs: key '" + key +
                                            "' is not a non-negative integer");
            if (k > max_k) max_k = k;
        }
        std::vector<double> probs(static_cast<std::size_t>(max_k) + 1, 0.0);
        for (const auto& [key, value] : j.at("probs").items()) {
            if (!value.is_number())
                throw std::invalid_argument("prediction_count.probs['" + key + "']: not a number");
            probs[std::stoi(key)] = value.get<double>();
        }
        return PredictionCountDist::categorical(std::move(probs));
    }
    throw std::invalid_argument("prediction_count.kind: unknown kind '" + kind + "'");
}

}  // namespace

ThinkingModel model_from_json_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    for (const char* field : {"answers", "types", "w", "lambda"})
        if (!j.contains(field)) throw std::invalid_argument(std::string(field) + ": missing field");

    ThinkingModel model;
    model.answers = labels_from_json(j.at("answers"), "answers");
    model.types = labels_from_json(j.at("types"), "types");
    model.w = mat_from_json(j.at("w"), "w", static_cast<int>(model.types.size()),
                            static_cast<int>(model.answers.size()));
    model.lambda = mat_from_json(j.at("lambda"), "lambda", static_cast<int>(model.types.size()),
                                 static_cast<int>(model.types.size()));
    if (j.contains("prediction_count")) model.prediction_count = pcount_from_json(j.at("prediction_count"));
    model.validate();
    return model;
}

ThinkingModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

std::string model_to_json(const ThinkingModel& model) {
    ordered_json j;
    j["answers"] = model.answers;
    j["types"] = model.types;
    ordered_json w = ordered_json::array();
    for (int t = 0; t < model.w.rows; ++t)
        w.push_back(std::vector<double>(model.w.row(t), model.w.row(t) + model.w.cols));
    j["w"] = std::move(w);
    ordered_json lam = ordered_json::array();
    for (int t = 0; t < model.lambda.rows; ++t)
        lam.push_back(std::vector<double>(model.lambda.row(t), model.lambda.row(t) + model.lambda.cols));
    j["lambda"] = std::move(lam);
    ordered_json pc;
    int nonzero = 0, point_k = 0;
    for (std::size_t k = 0; k < model.prediction_count.probs.size(); ++k)
        if (model.prediction_count.probs[k] != 0.0) {
            ++nonzero;
            point_k = static_cast<int>(k);
        }
    if (nonzero == 1 && model.prediction_count.probs[point_k] == 1.0) {
        pc["kind"] = "point";
        pc["value"] = point_k;
    } else {
        pc["kind"] = "categorical";
        ordered_json probs;
        for (std::size_t k = 0; k < model.prediction_count.probs.size(); ++k)
            if (model.prediction_count.probs[k] != 0.0)
                probs[std::to_string(k)] = model.prediction_count.probs[k];
        pc["probs"] = std::move(probs);
    }
    j["prediction_count"] = std::move(pc);
    return j.dump(2) + "\n";
}

}  // namespace thinkrank
