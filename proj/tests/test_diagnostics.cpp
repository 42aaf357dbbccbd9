#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "thinkrank/diagnostics.hpp"
#include "thinkrank/sampling.hpp"

using namespace thinkrank;
using testutil::random_matrix;
using testutil::random_positive;
using testutil::worked_example_m;
using testutil::worked_example_p;

TEST_CASE("lack of fit of the worked example's default order") {
    const Mat m = worked_example_m();
    const Ranking r = rank_default(m, worked_example_p());
    const FitReport fit = lack_of_fit(m, r.order);
    CHECK(testutil::close(fit.raw, 0.012544, 1e-12));
    CHECK(testutil::close(fit.normalized, 0.012544 / 0.264376, 1e-9));
    // the permutation residual is exactly the strict lower triangle
    CHECK(testutil::close(fit.raw, strict_lower_sum_sq(m, r.order), 1e-15));
}

TEST_CASE("lack of fit of the worked example's variant solution is zero") {
    const Mat m = worked_example_m();
    const ClusterHierarchy h = rank_variant(m, worked_example_p());
    const FitReport fit = lack_of_fit(m, h.w_unit);
    CHECK(fit.raw <= 1e-12);
}

TEST_CASE("upper-triangular matrix in identity order fits perfectly") {
    const Mat m = mat_from({{0.5, 0.2, 0.1}, {0.0, 0.1, 0.05}, {0.0, 0.0, 0.05}});
    const FitReport fit = lack_of_fit(m, std::vector<int>{0, 1, 2});
    CHECK(fit.raw == 0.0);
    CHECK(fit.normalized == 0.0);
}

TEST_CASE("the DP order minimizes lack of fit over all permutations") {
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 5;  // 2..6
        const Mat m = random_matrix(n, 40 + trial);
        const std::vector<double> p = random_positive(n, 50 + trial);
        const Ranking r = rank_default(m, p);
        const double best = lack_of_fit(m, r.order).raw;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            const FitReport fit = lack_of_fit(m, perm);
            CHECK(best <= fit.raw + 1e-12);
            // permutation residual is a sub-sum of ‖M‖²_F
            CHECK(fit.normalized >= 0.0);
            CHECK(fit.normalized <= 1.0 + 1e-12);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST_CASE("circle-style data ranks the correct answer first while plurality fails") {
    const auto matrix = build_matrix(testutil::circle_records(), CanonicalizationMap{}, 0.03,
                                     "IDK", PredictionPolicy::all);
    CHECK(plurality(matrix) == "3");
    const Ranking r = rank_default(matrix.counts_mat(), matrix.support_frequencies());
    CHECK(matrix.answers[r.order[0]] == "4");
    // the prediction structure is purely downward, so the fit is perfect
    CHECK(lack_of_fit(matrix.counts_mat(), r.order).raw == 0.0);
}

TEST_CASE("normalized lack of fit is scale-invariant") {
    const Mat m = worked_example_m();
    const Ranking r = rank_default(m, worked_example_p());
    Mat scaled = m;
    for (double& v : scaled.a) v *= 217.0;
    CHECK(testutil::close(lack_of_fit(m, r.order).normalized,
                          lack_of_fit(scaled, r.order).normalized, 1e-12));
}

TEST_CASE("lack-of-fit identity holds on random (M, W) pairs") {
    std::mt19937 gen(9);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(gen() % 7);  // 2..8
        const int k = 1 + static_cast<int>(gen() % n);
        const Mat m = random_matrix(n, 6000 + trial);
        // random hard clustering with frequency-proportional weights
        const std::vector<double> p = random_positive(n, 7000 + trial);
        std::vector<int> assign(n);
        for (int a = 0; a < n; ++a) assign[a] = a < k ? a : static_cast<int>(gen() % k);
        Mat w(k, n);
        std::vector<double> norm(k, 0.0);
        for (int a = 0; a < n; ++a) norm[assign[a]] += p[a] * p[a];
        for (int a = 0; a < n; ++a) w.at(assign[a], a) = p[a] / std::sqrt(norm[assign[a]]);
        CHECK(lack_of_fit_identity_check(m, w) <= 1e-9);
    }
}

TEST_CASE("lack-of-fit identity with W = I reduces to the strict lower sum") {
    const Mat m = worked_example_m();
    Mat eye(3, 3);
    for (int i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
    CHECK(lack_of_fit_identity_check(m, eye) <= 1e-15);
}

TEST_CASE("lack-of-fit identity at the exact-fit W of the worked example") {
    const Mat m = worked_example_m();
    const ClusterHierarchy h = rank_variant(m, worked_example_p());
    CHECK(lack_of_fit_identity_check(m, h.w_unit) <= 1e-12);
}

TEST_CASE("lack-of-fit identity rejects non-semi-orthogonal W") {
    const Mat m = worked_example_m();
    const Mat w = mat_from({{0.5, 0.5, 0.0}});
    CHECK_THROWS_WITH_AS(lack_of_fit_identity_check(m, w), doctest::Contains("semi-orthogonal"),
                         std::invalid_argument);
}

TEST_CASE("plurality picks max support with lexicographic ties") {
    AnswerPredictionMatrix matrix;
    matrix.answers = {"3", "6", "9", "4", "1", "2"};
    matrix.support = {134, 27, 21, 16, 11, 8};
    matrix.counts.assign(6, std::vector<std::int64_t>(6, 0));
    matrix.n_respondents = 217;
    CHECK(plurality(matrix) == "3");

    matrix.answers = {"b", "a"};
    matrix.support = {5, 5};
    matrix.counts.assign(2, std::vector<std::int64_t>(2, 0));
    CHECK(plurality(matrix) == "a");

    matrix.answers = {"only"};
    matrix.support = {74};
    matrix.counts.assign(1, std::vector<std::int64_t>(1, 0));
    CHECK(plurality(matrix) == "only");
}

TEST_CASE("plurality reflects the 74-vs-3 failure the ranker corrects") {
    // answer "Yalu" supported by 74, the correct "Yalu & Dooman" by 3 plus a
    // third answer to survive thresholds; the sophisticated few predict the
    // popular answer, never the reverse
    std::vector<ResponseRecord> records;
    int id = 0;
    auto add = [&](int copies, const std::string& answer, std::vector<std::string> preds) {
        for (int i = 0; i < copies; ++i)
            records.push_back({"r" + std::to_string(++id), "q1", answer, preds});
    };
    add(3, "yalu & dooman", {"yalu"});
    add(74, "yalu", {"songhua"});
    add(5, "songhua", {});
    const auto matrix =
        build_matrix(records, CanonicalizationMap{}, 0.03, "IDK", PredictionPolicy::all);
    CHECK(plurality(matrix) == "yalu");

    const Ranking r = rank_default(matrix.counts_mat(), matrix.support_frequencies());
    CHECK(matrix.answers[r.order[0]] == "yalu & dooman");
}

TEST_CASE("evaluate: majority-wrong synthetic batch") {
    // two types; the sophisticated minority answers correctly and predicts the
    // majority's wrong answers, the majority never predicts the truth
    std::vector<QuestionInput> questions;
    for (int q = 0; q < 10; ++q) {
        ThinkingModel model;
        model.answers = {"right", "wrong_a", "wrong_b"};
        model.types = {"hi", "lo"};
        model.w = mat_from({{1.0, 0.0, 0.0}, {0.0, 0.55, 0.45}});
        model.lambda = mat_from({{0.06, 0.14}, {0.0, 0.8}});
        QuestionInput question;
        question.question_id = "q" + std::to_string(q);
        question.records = sample_dataset(model, 1500, 100 + q, question.question_id);
        question.truth = "right";
        questions.push_back(std::move(question));
    }
    EvalConfig config;
    const EvalResult result = evaluate(questions, config);
    CHECK(result.aggregates.n_questions == 10);
    CHECK(result.aggregates.n_errors == 0);
    CHECK(result.aggregates.correct_default == 10);
    CHECK(result.aggregates.correct_variant == 10);
    CHECK(result.aggregates.correct_plurality == 0);
    for (const QuestionResult& qr : result.questions) {
        REQUIRE(qr.default_top.has_value());
        CHECK(*qr.default_top == "right");
        CHECK(qr.plurality_answer != "right");
    }
}

TEST_CASE("evaluate records per-question errors without failing the batch") {
    std::vector<QuestionInput> questions(2);
    questions[0].question_id = "ok";
    questions[0].records = {{"r1", "ok", "x", {"x"}}, {"r2", "ok", "x", {}}};
    questions[1].question_id = "broken";
    questions[1].records = {{"r1", "broken", "lonely", {}}};  // support 1: nothing survives
    const EvalResult result = evaluate(questions, EvalConfig{});
    CHECK(!result.questions[0].error.has_value());
    REQUIRE(result.questions[1].error.has_value());
    CHECK(*result.questions[1].error == "no answer survives threshold");
    CHECK(result.aggregates.n_errors == 1);
}

TEST_CASE("evaluate: variant's top answer is the most-supported one in the top cluster") {
    // counts are an exact hard-clustered decomposition whose top cluster holds
    // two answers {a, b}; the reported top must be the better-supported "a"
    // even when the truth is "b" (a known failure mode of the variant)
    std::vector<QuestionInput> questions(1);
    questions[0].question_id = "q";
    int id = 0;
    auto add = [&](int copies, const std::string& answer, const std::string& pred) {
        for (int i = 0; i < copies; ++i)
            questions[0].records.push_back({"r" + std::to_string(++id), "q", answer, {pred}});
    };
    add(18, "a", "a");
    add(12, "a", "b");
    add(18, "a", "c");
    add(12, "b", "a");
    add(8, "b", "b");
    add(12, "b", "c");
    add(20, "c", "c");
    questions[0].truth = "b";
    const EvalResult result = evaluate(questions, EvalConfig{});
    const QuestionResult& qr = result.questions[0];
    REQUIRE(!qr.error.has_value());
    CHECK(*qr.variant_top == "a");
    CHECK(result.aggregates.correct_variant == 0);
}

TEST_CASE("evaluate: methods agree when the data is consistent") {
    std::vector<QuestionInput> questions(1);
    questions[0].question_id = "q";
    for (int i = 0; i < 30; ++i)
        questions[0].records.push_back({"r" + std::to_string(i), "q", "top", {"low"}});
    for (int i = 30; i < 40; ++i)
        questions[0].records.push_back({"r" + std::to_string(i), "q", "low", {"low"}});
    const EvalResult result = evaluate(questions, EvalConfig{});
    const QuestionResult& qr = result.questions[0];
    REQUIRE(!qr.error.has_value());
    CHECK(*qr.default_top == qr.plurality_answer);
    CHECK(*qr.variant_top == qr.plurality_answer);
}
