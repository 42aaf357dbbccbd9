#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinkrank {

/// One respondent's raw feedback to one question.
struct ResponseRecord {
    std::string respondent_id;
    std::string question_id;
    std::string answer;                    // raw; may be the don't-know token
    std::vector<std::string> predictions;  // raw, possibly empty

    bool operator==(const ResponseRecord&) const = default;
};

/// Input parsing failure carrying the 1-based line number.
struct CsvError : std::runtime_error {
    int line;
    CsvError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

/// Responses CSV (UTF-8, RFC 4180 quoting). Header is required:
///   respondent_id,question_id,answer,predictions
/// The predictions field is a semicolon-separated list; empty allowed.
std::vector<ResponseRecord> records_from_csv(std::istream& in);
std::vector<ResponseRecord> records_from_csv_text(const std::string& text);
std::string records_to_csv(const std::vector<ResponseRecord>& records);

}  // namespace thinkrank
