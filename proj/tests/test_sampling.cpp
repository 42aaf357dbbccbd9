#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unordered_map>

#include "doctest.h"
#include "helpers.hpp"
#include "thinkrank/sampling.hpp"

using namespace thinkrank;
using testutil::worked_example_model;

TEST_CASE("single-answer model is fully deterministic") {
    ThinkingModel model;
    model.answers = {"x"};
    model.types = {"t"};
    model.w = mat_from({{1.0}});
    model.lambda = mat_from({{1.0}});
    const auto records = sample_dataset(model, 50, 123);
    REQUIRE(records.size() == 50);
    for (const auto& r : records) {
        CHECK(r.answer == "x");
        CHECK(r.predictions == std::vector<std::string>{"x"});
    }
}

TEST_CASE("same seed gives identical records, different seeds differ") {
    const ThinkingModel model = worked_example_model();
    const auto a = sample_dataset(model, 3000, 7);
    const auto b = sample_dataset(model, 3000, 7);
    CHECK(a == b);
    const auto c = sample_dataset(model, 3000, 8);
    CHECK(a != c);
}

TEST_CASE("parallel sampling is byte-identical to the serial path") {
    const ThinkingModel model = worked_example_model();
    const std::int64_t n = 20000;  // above the parallel threshold
    const auto serial = sample_dataset(model, n, 42);
    const auto parallel = sample_dataset_parallel(model, n, 42);
    CHECK(serial == parallel);
    for (std::int64_t i : {std::int64_t(0), std::int64_t(137), n - 1})
        CHECK(serial[static_cast<std::size_t>(i)] == detail::sample_record(model, 42, i, "q1"));
}

TEST_CASE("answer marginals of 1e5 samples are close to p") {
    const ThinkingModel model = worked_example_model();
    const auto records = sample_dataset(model, 100000, 31);
    const std::vector<double> p = model.answer_marginals();
    std::unordered_map<std::string, double> freq;
    for (const auto& r : records) freq[r.answer] += 1.0 / records.size();
    for (std::size_t a = 0; a < model.answers.size(); ++a)
        CHECK(testutil::close(freq[model.answers[a]], p[a], 0.01));
}

TEST_CASE("empirical joint approaches compute_joint (moderate n)") {
    const ThinkingModel model = worked_example_model();
    const auto records = sample_dataset(model, 200000, 5);
    CHECK(expected_matrix_proportionality(model, records) <= 0.01);
}

TEST_CASE("three predictions per respondent leave the normalized joint unchanged") {
    ThinkingModel model = worked_example_model();
    model.prediction_count = PredictionCountDist::point(3);
    const auto records = sample_dataset(model, 200000, 5);
    std::int64_t total_predictions = 0;
    for (const auto& r : records) total_predictions += static_cast<std::int64_t>(r.predictions.size());
    CHECK(total_predictions == 600000);
    CHECK(expected_matrix_proportionality(model, records) <= 0.01);
}

TEST_CASE("exact tabulation of c*M has zero deviation") {
    // counts 448, 0, 112 / 120, 150, 30 / 112, 0, 28 = 1000 * M
    const ThinkingModel model = worked_example_model();
    const Mat m = testutil::worked_example_m();
    std::vector<ResponseRecord> records;
    int id = 0;
    for (int a = 0; a < 3; ++a)
        for (int g = 0; g < 3; ++g) {
            const int copies = static_cast<int>(m.at(a, g) * 1000.0 + 0.5);
            for (int c = 0; c < copies; ++c)
                records.push_back({"r" + std::to_string(++id), "q1", model.answers[a],
                                   {model.answers[g]}});
        }
    CHECK(expected_matrix_proportionality(model, records) <= 1e-15);
}

TEST_CASE("records without predictions raise 'no prediction mass'") {
    const ThinkingModel model = worked_example_model();
    std::vector<ResponseRecord> records{{"r1", "q1", "3", {}}, {"r2", "q1", "4", {}}};
    CHECK_THROWS_WITH_AS(expected_matrix_proportionality(model, records), "no prediction mass",
                         std::runtime_error);
}

TEST_CASE("negative n is rejected") {
    CHECK_THROWS_AS(sample_dataset(worked_example_model(), -1, 0), std::invalid_argument);
}

TEST_CASE("n = 0 yields an empty dataset") {
    CHECK(sample_dataset(worked_example_model(), 0, 0).empty());
}
