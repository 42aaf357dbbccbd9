// thinkrank: learn a thinking hierarchy over crowd answers and rank them.
//
// Subcommands: rank, simulate, heatmap, evaluate. Reports go to stdout, logs
// to stderr. Exit codes: 0 ok, 2 input/parse error, 3 exact-search cap
// exceeded.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thinkrank/diagnostics.hpp"
#include "thinkrank/model.hpp"
#include "thinkrank/records.hpp"
#include "thinkrank/reports.hpp"
#include "thinkrank/sampling.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace thinkrank;

struct CommonOpts {
    std::string input;
    std::string format = "auto";  // auto | csv | matrix
    std::string canon_path;
    double threshold = 0.03;
    std::string dont_know_token = "IDK";
    std::string prediction_policy = "all";  // all | first_only
    std::string p_source = "support";       // support | row_sum
    std::string algorithm = "both";         // default | variant | both
    int cap_default = kDefaultRankCap;
    int cap_variant = kVariantRankCap;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("input", opts.input, "responses CSV or matrix JSON ('-' for stdin)")->required();
    cmd->add_option("--format", opts.format, "input format: auto|csv|matrix")
        ->check(CLI::IsMember({"auto", "csv", "matrix"}));
    cmd->add_option("--canon", opts.canon_path, "canonicalization map JSON");
    cmd->add_option("--threshold", opts.threshold, "answer retention threshold (default 0.03)");
    cmd->add_option("--dont-know-token", opts.dont_know_token, "don't-know answer token");
    cmd->add_option("--prediction-policy", opts.prediction_policy, "all|first_only")
        ->check(CLI::IsMember({"all", "first_only"}));
    cmd->add_option("--p-source", opts.p_source, "answer frequencies: support|row_sum")
        ->check(CLI::IsMember({"support", "row_sum"}));
    cmd->add_option("--algorithm", opts.algorithm, "default|variant|both")
        ->check(CLI::IsMember({"default", "variant", "both"}));
    cmd->add_option("--cap-default", opts.cap_default, "max |A| for the default ranking")
        ->check(CLI::Range(1, kDefaultRankCap));
    cmd->add_option("--cap-variant", opts.cap_variant, "max |A| for the variant ranking")
        ->check(CLI::Range(1, kVariantRankCap));
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

std::string detect_format(const std::string& path, const std::string& text) {
    if (path != "-") {
        const auto ext = std::filesystem::path(path).extension().string();
        if (ext == ".csv") return "csv";
        if (ext == ".json") return "matrix";
    }
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
        return c == '{' ? "matrix" : "csv";
    }
    return "csv";
}

CanonicalizationMap load_canon_opt(const CommonOpts& opts) {
    if (opts.canon_path.empty()) return CanonicalizationMap{};
    return load_canonicalization(opts.canon_path);
}

/// Either input format reduced to the pieces ranking needs.
AnswerPredictionMatrix load_matrix(const CommonOpts& opts) {
    const std::string text = read_input(opts.input);
    const std::string format = opts.format == "auto" ? detect_format(opts.input, text) : opts.format;
    if (format == "csv") {
        const std::vector<ResponseRecord> records = records_from_csv_text(text);
        const CanonicalizationMap canon = load_canon_opt(opts);
        const PredictionPolicy policy = opts.prediction_policy == "first_only"
                                            ? PredictionPolicy::first_only
                                            : PredictionPolicy::all;
        return build_matrix(records, canon, opts.threshold, opts.dont_know_token, policy);
    }
    try {
        return matrix_from_json_text(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                                 e.what());
    }
}

std::vector<double> frequencies(const AnswerPredictionMatrix& matrix, const std::string& source) {
    return answer_frequencies(matrix,
                              source == "row_sum" ? PSource::row_sum : PSource::support);
}

int cmd_rank(const CommonOpts& opts) {
    const AnswerPredictionMatrix matrix = load_matrix(opts);
    const Mat counts = matrix.counts_mat();
    const std::vector<double> p = frequencies(matrix, opts.p_source);

    RankReportInputs report;
    report.answers = matrix.answers;
    report.plurality_answer = plurality(matrix);
    report.dropped_predictions = matrix.dropped_predictions;

    if (opts.algorithm != "variant") {
        if (matrix.size() > opts.cap_default)
            throw CapExceeded("rank: answer set too large for exact search (|A| = " +
                              std::to_string(matrix.size()) + " > " +
                              std::to_string(opts.cap_default) + ")");
        report.ranking = rank_default(counts, p);
        report.fit = lack_of_fit(counts, report.ranking->order);
    }
    if (opts.algorithm != "default") {
        if (matrix.size() > opts.cap_variant)
            throw CapExceeded("rank: answer set too large for exact partition search (|A| = " +
                              std::to_string(matrix.size()) + " > " +
                              std::to_string(opts.cap_variant) + ")");
        report.hierarchy = rank_variant(counts, p);
    }
    std::cout << rank_report_json(report);
    return 0;
}

int cmd_simulate(const std::string& model_path, std::int64_t n, std::uint64_t seed,
                 const std::string& question_id) {
    const ThinkingModel model = load_model(model_path);
    const std::vector<ResponseRecord> records = sample_dataset(model, n, seed, question_id);
    std::cout << records_to_csv(records);
    return 0;
}

int cmd_heatmap(const CommonOpts& opts, const std::string& display_diagonal) {
    const AnswerPredictionMatrix matrix = load_matrix(opts);
    if (matrix.size() > opts.cap_default)
        throw CapExceeded("heatmap: answer set too large for exact search (|A| = " +
                          std::to_string(matrix.size()) + " > " + std::to_string(opts.cap_default) +
                          ")");
    const Ranking ranking = rank_default(matrix.counts_mat(), frequencies(matrix, opts.p_source));
    const DisplayDiagonal diagonal =
        display_diagonal == "support" ? DisplayDiagonal::support : DisplayDiagonal::raw;
    std::cout << heatmap_json(matrix, ranking, diagonal);
    return 0;
}

int cmd_evaluate(const std::string& manifest_path, const CommonOpts& opts, int jobs) {
    const std::string text = read_input(manifest_path);
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                                 e.what());
    }
    if (!manifest.contains("questions") || !manifest.at("questions").is_array())
        throw std::runtime_error("manifest: expected a 'questions' array");

    const std::filesystem::path base =
        manifest_path == "-" ? std::filesystem::current_path()
                             : std::filesystem::absolute(manifest_path).parent_path();

    std::vector<QuestionInput> questions;
    for (const auto& entry : manifest.at("questions")) {
        if (!entry.contains("path") || !entry.at("path").is_string())
            throw std::runtime_error("manifest: each question needs a 'path'");
        std::filesystem::path p = entry.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        std::ifstream in(p, std::ios::binary);
        if (!in) throw std::runtime_error("manifest: cannot open " + p.string());
        QuestionInput q;
        q.records = records_from_csv(in);
        q.question_id = q.records.empty() ? p.stem().string() : q.records.front().question_id;
        if (entry.contains("truth") && entry.at("truth").is_string())
            q.truth = entry.at("truth").get<std::string>();
        questions.push_back(std::move(q));
    }

    EvalConfig config;
    config.threshold = opts.threshold;
    config.dont_know_token = opts.dont_know_token;
    config.policy = opts.prediction_policy == "first_only" ? PredictionPolicy::first_only
                                                           : PredictionPolicy::all;
    config.p_source = opts.p_source == "row_sum" ? PSource::row_sum : PSource::support;
    config.algorithm = opts.algorithm == "default"   ? AlgorithmChoice::default_only
                       : opts.algorithm == "variant" ? AlgorithmChoice::variant_only
                                                     : AlgorithmChoice::both;
    config.cap_default = opts.cap_default;
    config.cap_variant = opts.cap_variant;
    config.jobs = jobs;
    config.canon = load_canon_opt(opts);

    std::cout << eval_report_json(evaluate(questions, config));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thinkrank: rank crowd answers by the thinking hierarchy behind them"};
    app.require_subcommand(1);

    CommonOpts rank_opts;
    CLI::App* rank = app.add_subcommand("rank", "rank one question's answers");
    add_common(rank, rank_opts);

    std::string model_path, question_id = "q1";
    std::int64_t sim_n = 0;
    std::uint64_t seed = 0;
    CLI::App* simulate = app.add_subcommand("simulate", "sample synthetic respondents from a model");
    simulate->add_option("model", model_path, "model JSON file")->required();
    simulate->add_option("--n", sim_n, "number of respondents")->required();
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--question-id", question_id, "question id for the emitted rows");

    CommonOpts heatmap_opts;
    std::string display_diagonal = "support";
    CLI::App* heatmap = app.add_subcommand("heatmap", "emit the ranked matrix as plot-ready JSON");
    add_common(heatmap, heatmap_opts);
    heatmap->add_option("--display-diagonal", display_diagonal, "support|raw")
        ->check(CLI::IsMember({"support", "raw"}));

    CommonOpts eval_opts;
    std::string manifest_path;
    int jobs = 0;
    CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "run a batch of questions");
    evaluate_cmd->add_option("manifest", manifest_path, "manifest JSON listing per-question CSVs")
        ->required();
    evaluate_cmd->add_option("--jobs", jobs, "parallel question workers (0 = all cores)");
    evaluate_cmd->add_option("--canon", eval_opts.canon_path, "canonicalization map JSON");
    evaluate_cmd->add_option("--threshold", eval_opts.threshold, "answer retention threshold");
    evaluate_cmd->add_option("--dont-know-token", eval_opts.dont_know_token, "don't-know token");
    evaluate_cmd->add_option("--prediction-policy", eval_opts.prediction_policy, "all|first_only")
        ->check(CLI::IsMember({"all", "first_only"}));
    evaluate_cmd->add_option("--p-source", eval_opts.p_source, "support|row_sum")
        ->check(CLI::IsMember({"support", "row_sum"}));
    evaluate_cmd->add_option("--algorithm", eval_opts.algorithm, "default|variant|both")
        ->check(CLI::IsMember({"default", "variant", "both"}));
    evaluate_cmd->add_option("--cap-default", eval_opts.cap_default, "max |A| for the default ranking")
        ->check(CLI::Range(1, kDefaultRankCap));
    evaluate_cmd->add_option("--cap-variant", eval_opts.cap_variant, "max |A| for the variant ranking")
        ->check(CLI::Range(1, kVariantRankCap));

    CLI11_PARSE(app, argc, argv);

    try {
        if (rank->parsed()) return cmd_rank(rank_opts);
        if (simulate->parsed()) return cmd_simulate(model_path, sim_n, seed, question_id);
        if (heatmap->parsed()) return cmd_heatmap(heatmap_opts, display_diagonal);
        if (evaluate_cmd->parsed()) return cmd_evaluate(manifest_path, eval_opts, jobs);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
