#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "thinkrank/model.hpp"
#include "thinkrank/records.hpp"
#include "thinkrank/rng.hpp"

namespace testutil {

using thinkrank::Mat;
using thinkrank::ThinkingModel;

/// Canonical two-type fixture shared across the tests, stored so Λ is
/// upper-triangular: type "hi" answers 4, type "lo" answers 3 or 6.
inline ThinkingModel worked_example_model() {
    ThinkingModel model;
    model.answers = {"3", "4", "6"};
    model.types = {"hi", "lo"};
    model.w = thinkrank::mat_from({{0.0, 1.0, 0.0}, {0.8, 0.0, 0.2}});
    model.lambda = thinkrank::mat_from({{0.15, 0.15}, {0.0, 0.7}});
    return model;
}

/// Wᵀ Λ W of the example, multiplied out by hand over answers (3, 4, 6).
inline Mat worked_example_m() {
    return thinkrank::mat_from(
        {{0.448, 0.0, 0.112}, {0.12, 0.15, 0.03}, {0.112, 0.0, 0.028}});
}

inline std::vector<double> worked_example_p() { return {0.56, 0.30, 0.14}; }

/// A circle-puzzle style question with supports 3 (134), 6 (27), 9 (21),
/// 4 (16), 1 (11), 2 (8) over 217 answering respondents, with predictions
/// following the elicited hierarchy 4 -> 3 -> 6 -> 9 -> 1 -> 2 (downward
/// only) and 28 of the "3" answerers predicting "6".
inline std::vector<thinkrank::ResponseRecord> circle_records() {
    std::vector<thinkrank::ResponseRecord> records;
    int id = 0;
    auto add = [&](int copies, const std::string& answer, std::vector<std::string> preds) {
        for (int i = 0; i < copies; ++i)
            records.push_back({"r" + std::to_string(++id), "q1", answer, preds});
    };
    add(10, "4", {"3"});
    add(6, "4", {"3", "6"});
    add(28, "3", {"6"});
    add(40, "3", {"9"});
    add(30, "3", {"1"});
    add(36, "3", {});
    add(15, "6", {"9"});
    add(12, "6", {"1"});
    add(11, "9", {"1"});
    add(10, "9", {"2"});
    add(11, "1", {"2"});
    add(8, "2", {});
    return records;
}

inline Mat random_matrix(int n, std::uint64_t seed) {
    thinkrank::RngStream rng(seed, 0);
    Mat m(n, n);
    for (double& v : m.a) v = rng.next_unit();
    return m;
}

inline std::vector<double> random_positive(int n, std::uint64_t seed) {
    thinkrank::RngStream rng(seed, 1);
    std::vector<double> p(n);
    for (double& v : p) v = 0.05 + rng.next_unit();
    return p;
}

inline bool close(double x, double y, double tol) { return std::abs(x - y) <= tol; }

}  // namespace testutil
