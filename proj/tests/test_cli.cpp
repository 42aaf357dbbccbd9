#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "thinkrank/model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "thinkrank_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Runs the CLI with stdout captured to a file; stderr stays visible.
RunResult run(const std::string& args) {
    const fs::path out_path = scratch_dir() / "stdout.tmp";
    const std::string cmd = std::string(THINKRANK_CLI_PATH) + " " + args + " > " + out_path.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    return result;
}

const char* kExampleModel = R"({
  "answers": ["3", "4", "6"],
  "types": ["hi", "lo"],
  "w": [[0.0, 1.0, 0.0], [0.8, 0.0, 0.2]],
  "lambda": [[0.15, 0.15], [0.0, 0.7]],
  "prediction_count": {"kind": "point", "value": 1}
})";

/// The worked example's joint scaled to integer counts (x1000).
const char* kExampleMatrix = R"({
  "answers": ["3", "4", "6"],
  "counts": [[448, 0, 112], [120, 150, 30], [112, 0, 28]],
  "support": [560, 300, 140],
  "n_respondents": 1000
})";

}  // namespace

TEST_CASE("rank on the worked-example matrix") {
    const fs::path matrix = scratch_dir() / "example_matrix.json";
    write_file(matrix, kExampleMatrix);
    const RunResult r = run("rank " + matrix.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report.at("order_default") == json::array({"4", "3", "6"}));
    CHECK(report.at("plurality") == "3");
    CHECK(report.at("dropped_predictions") == 0);
    CHECK(report.at("clusters_variant").at("order") == json::array({"4", "3", "6"}));
}

TEST_CASE("rank report is byte-identical across runs") {
    const fs::path matrix = scratch_dir() / "stable_matrix.json";
    write_file(matrix, kExampleMatrix);
    const RunResult a = run("rank " + matrix.string());
    const RunResult b = run("rank " + matrix.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("empty input file exits 2") {
    const fs::path empty = scratch_dir() / "empty.csv";
    write_file(empty, "");
    CHECK(run("rank " + empty.string()).exit_code == 2);
}

TEST_CASE("malformed csv exits 2") {
    const fs::path bad = scratch_dir() / "bad.csv";
    write_file(bad, "respondent_id,question_id,answer,predictions\nr1,q1,a\n");
    CHECK(run("rank " + bad.string()).exit_code == 2);
}

TEST_CASE("cap exceeded exits 3") {
    const fs::path matrix = scratch_dir() / "wide_matrix.json";
    write_file(matrix, R"({"answers": ["a", "b", "c", "d"],
      "counts": [[1,1,1,1],[1,1,1,1],[1,1,1,1],[1,1,1,1]],
      "support": [2, 2, 2, 2], "n_respondents": 8})");
    CHECK(run("rank --cap-default 3 --algorithm default " + matrix.string()).exit_code == 3);
}

TEST_CASE("simulate is deterministic and round-trips through rank") {
    const fs::path model = scratch_dir() / "model.json";
    write_file(model, kExampleModel);
    const RunResult a = run("simulate " + model.string() + " --n 5000 --seed 11");
    const RunResult b = run("simulate " + model.string() + " --n 5000 --seed 11");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("respondent_id,question_id,answer,predictions\n", 0) == 0);

    const fs::path csv = scratch_dir() / "sim.csv";
    write_file(csv, a.out);
    const RunResult ranked = run("rank " + csv.string());
    REQUIRE(ranked.exit_code == 0);
    // the top answer is strict; the relative order of 3 and 6 is a sampling
    // coin flip because the model's joint carries 0.112 on both sides
    const json report = json::parse(ranked.out);
    const json order = report.at("order_default");
    CHECK(order[0] == "4");
    CHECK((order == json::array({"4", "3", "6"}) || order == json::array({"4", "6", "3"})));
    CHECK(report.at("plurality") == "3");
}

TEST_CASE("simulate with n = 0 emits only the header") {
    const fs::path model = scratch_dir() / "model0.json";
    write_file(model, kExampleModel);
    const RunResult r = run("simulate " + model.string() + " --n 0 --seed 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "respondent_id,question_id,answer,predictions\n");
}

TEST_CASE("simulate rejects an invalid model with exit 2") {
    const fs::path model = scratch_dir() / "bad_model.json";
    write_file(model, R"({"answers": ["a"], "types": ["t"], "w": [[0.9]], "lambda": [[1.0]]})");
    CHECK(run("simulate " + model.string() + " --n 10 --seed 1").exit_code == 2);
}

TEST_CASE("heatmap reorders and can swap the diagonal to supports") {
    const fs::path matrix = scratch_dir() / "heat_matrix.json";
    write_file(matrix, kExampleMatrix);
    const RunResult raw = run("heatmap --display-diagonal raw " + matrix.string());
    REQUIRE(raw.exit_code == 0);
    const json jraw = json::parse(raw.out);
    CHECK(jraw.at("answers") == json::array({"4", "3", "6"}));
    CHECK(jraw.at("grid")[0] == json::array({150, 120, 30}));
    CHECK(jraw.at("grid")[1] == json::array({0, 448, 112}));
    CHECK(jraw.at("grid")[2] == json::array({0, 112, 28}));

    const RunResult sup = run("heatmap --display-diagonal support " + matrix.string());
    REQUIRE(sup.exit_code == 0);
    const json jsup = json::parse(sup.out);
    CHECK(jsup.at("grid")[0] == json::array({300, 120, 30}));
    CHECK(jsup.at("grid")[1] == json::array({0, 560, 112}));
    CHECK(jsup.at("grid")[2] == json::array({0, 112, 140}));
}

TEST_CASE("heatmap strict-lower mass never exceeds strict-upper mass") {
    const fs::path model_path = scratch_dir() / "heat_model.json";
    write_file(model_path, thinkrank::model_to_json(testutil::worked_example_model()));
    const RunResult sim = run("simulate " + model_path.string() + " --n 4000 --seed 3");
    REQUIRE(sim.exit_code == 0);
    const fs::path csv = scratch_dir() / "heat.csv";
    write_file(csv, sim.out);
    const RunResult heat = run("heatmap --display-diagonal raw " + csv.string());
    REQUIRE(heat.exit_code == 0);
    const json grid = json::parse(heat.out).at("grid");
    double upper = 0.0, lower = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double v = grid[i][j].get<double>();
            if (i < j) upper += v * v;
            if (i > j) lower += v * v;
        }
    CHECK(lower <= upper);
}

TEST_CASE("evaluate runs a manifest and reports aggregates") {
    const fs::path model_path = scratch_dir() / "eval_model.json";
    write_file(model_path, kExampleModel);
    json manifest;
    manifest["questions"] = json::array();
    for (int q = 0; q < 4; ++q) {
        const fs::path csv = scratch_dir() / ("evalq" + std::to_string(q) + ".csv");
        const RunResult sim =
            run("simulate " + model_path.string() + " --n 1200 --seed " + std::to_string(40 + q) +
                " --question-id evalq" + std::to_string(q));
        REQUIRE(sim.exit_code == 0);
        write_file(csv, sim.out);
        manifest["questions"].push_back({{"path", csv.filename().string()}, {"truth", "4"}});
    }
    const fs::path manifest_path = scratch_dir() / "manifest.json";
    write_file(manifest_path, manifest.dump());

    const RunResult r = run("evaluate --jobs 2 " + manifest_path.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report.at("schema") == "eval/1");
    CHECK(report.at("aggregates").at("n_questions") == 4);
    CHECK(report.at("aggregates").at("n_with_truth") == 4);
    // the sampled questions recover "4" on top while plurality stays at "3"
    CHECK(report.at("aggregates").at("correct").at("default") == 4);
    CHECK(report.at("aggregates").at("correct").at("variant") == 4);
    CHECK(report.at("aggregates").at("correct").at("plurality") == 0);
    CHECK(report.at("questions").size() == 4);
    CHECK(report.at("questions")[0].at("question_id") == "evalq0");
}

TEST_CASE("p-source flag switches the tie-break frequencies") {
    // symmetric counts: the order is decided purely by the tie-break, which
    // sees unequal supports but equal row sums
    const fs::path matrix = scratch_dir() / "tie_matrix.json";
    write_file(matrix, R"({"answers": ["b", "a"], "counts": [[0, 2], [2, 0]],
      "support": [3, 10], "n_respondents": 13})");
    const RunResult by_support = run("rank --algorithm default " + matrix.string());
    REQUIRE(by_support.exit_code == 0);
    CHECK(json::parse(by_support.out).at("order_default") == json::array({"a", "b"}));
    const RunResult by_row_sum =
        run("rank --algorithm default --p-source row_sum " + matrix.string());
    REQUIRE(by_row_sum.exit_code == 0);
    CHECK(json::parse(by_row_sum.out).at("order_default") == json::array({"b", "a"}));
}

TEST_CASE("canonicalization map file merges answers") {
    const fs::path canon = scratch_dir() / "canon.json";
    write_file(canon, R"({"numeric_percent_to_fraction": true, "case_fold": true,
                          "synonyms": {"one half": "0.5"}})");
    const fs::path csv = scratch_dir() / "merge.csv";
    write_file(csv,
               "respondent_id,question_id,answer,predictions\n"
               "r1,q1,50%,0.41\n"
               "r2,q1,0.5,\n"
               "r3,q1,one half,\n"
               "r4,q1,0.41,\n"
               "r5,q1,0.41,50%\n");
    const RunResult r = run("rank --threshold 0 --canon " + canon.string() + " " + csv.string());
    REQUIRE(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report.at("answers") == json::array({"0.5", "0.41"}));
    CHECK(report.at("plurality") == "0.5");
}

TEST_CASE("evaluate with an empty manifest exits 0") {
    const fs::path manifest_path = scratch_dir() / "empty_manifest.json";
    write_file(manifest_path, R"({"questions": []})");
    const RunResult r = run("evaluate " + manifest_path.string());
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out).at("aggregates").at("n_questions") == 0);
}

TEST_CASE("evaluate with a missing file exits 2") {
    const fs::path manifest_path = scratch_dir() / "missing_manifest.json";
    write_file(manifest_path, R"({"questions": [{"path": "does_not_exist.csv"}]})");
    CHECK(run("evaluate " + manifest_path.string()).exit_code == 2);
}
