#include "thinkrank/sampling.hpp"

#include <stdexcept>
#include <unordered_map>

#include "thinkrank/rng.hpp"

namespace thinkrank {

namespace {

/// Read-only sampling state shared across threads: the lambda row sums are
/// hoisted out so the per-record path allocates nothing but the record itself.
struct RecordSampler {
    const ThinkingModel& model;
    std::vector<double> type_marginals;

    explicit RecordSampler(const ThinkingModel& m) : model(m), type_marginals(row_sums(m.lambda)) {}

    ResponseRecord operator()(std::uint64_t seed, std::int64_t index,
                              const std::string& question_id) const {
        RngStream rng(seed, static_cast<std::uint64_t>(index));
        const Mat& lambda = model.lambda;
        const Mat& w = model.w;
        const int nt = lambda.rows;
        const int na = w.cols;

        ResponseRecord r;
        r.respondent_id = "r" + std::to_string(index + 1);
        r.question_id = question_id;

        const int t = rng.categorical(type_marginals.data(), nt);
        r.answer = model.answers[rng.categorical(w.row(t), na)];

        const int k = rng.categorical(model.prediction_count.probs.data(),
                                      static_cast<int>(model.prediction_count.probs.size()));
        r.predictions.reserve(k);
        for (int j = 0; j < k; ++j) {
            // pick the oracle to run (row t of lambda, unnormalized), then its output
            const int tp = rng.categorical(lambda.row(t), nt);
            r.predictions.push_back(model.answers[rng.categorical(w.row(tp), na)]);
        }
        return r;
    }
};

}  // namespace

namespace detail {

ResponseRecord sample_record(const ThinkingModel& model, std::uint64_t seed, std::int64_t index,
                             const std::string& question_id) {
    return RecordSampler(model)(seed, index, question_id);
}

}  // namespace detail

std::vector<ResponseRecord> sample_dataset(const ThinkingModel& model, std::int64_t n,
                                           std::uint64_t seed, const std::string& question_id) {
    model.validate();
    if (n < 0) throw std::invalid_argument("sample_dataset: n must be >= 0");
    const RecordSampler sampler(model);
    std::vector<ResponseRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) records.push_back(sampler(seed, i, question_id));
    return records;
}

std::vector<ResponseRecord> sample_dataset_parallel(const ThinkingModel& model, std::int64_t n,
                                                    std::uint64_t seed,
                                                    const std::string& question_id) {
    model.validate();
    if (n < 0) throw std::invalid_argument("sample_dataset_parallel: n must be >= 0");
    const RecordSampler sampler(model);
    std::vector<ResponseRecord> records(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (std::int64_t i = 0; i < n; ++i)
        records[static_cast<std::size_t>(i)] = sampler(seed, i, question_id);
    return records;
}

double expected_matrix_proportionality(const ThinkingModel& model,
                                       const std::vector<ResponseRecord>& records) {
    const JointMatrix joint = compute_joint(model);
    const int na = static_cast<int>(model.answers.size());
    std::unordered_map<std::string, int> index;
    for (int a = 0; a < na; ++a) index.emplace(model.answers[a], a);

    Mat counts(na, na);
    double total = 0.0;
    for (const ResponseRecord& r : records) {
        const auto ia = index.find(r.answer);
        if (ia == index.end())
            throw std::invalid_argument("record answer '" + r.answer + "' is not in the model");
        for (const std::string& g : r.predictions) {
            const auto ig = index.find(g);
            if (ig == index.end())
                throw std::invalid_argument("record prediction '" + g + "' is not in the model");
            counts.at(ia->second, ig->second) += 1.0;
            total += 1.0;
        }
    }
    if (total == 0.0) throw std::runtime_error("no prediction mass");

    for (double& v : counts.a) v /= total;
    return max_abs_diff(counts, joint.m);
}

}  // namespace thinkrank
