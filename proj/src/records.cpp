#include "thinkrank/records.hpp"

#include <istream>
#include <sstream>

namespace thinkrank {

namespace {

constexpr const char* kHeader = "respondent_id,question_id,answer,predictions";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

/// RFC 4180 reader: quoted fields may contain commas, quotes ("" escapes) and
/// newlines. Returns one row per logical record and tracks physical lines for
/// error messages.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // false at end of input; throws CsvError on malformed quoting
    bool next_row(std::vector<std::string>& row, int& row_start_line) {
        row.clear();
        int c = in_.get();
        if (c == EOF) return false;
        row_start_line = line_;
        std::string field;
        bool quoted = false;
        while (true) {
            if (c == EOF) {
                if (quoted) throw CsvError(row_start_line, "unterminated quoted field");
                row.push_back(std::move(field));
                return true;
            }
            const char ch = static_cast<char>(c);
            if (ch == '\n') ++line_;
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        quoted = false;
                    }
                } else {
                    field.push_back(ch);
                }
            } else if (ch == '"') {
                if (!field.empty())
                    throw CsvError(line_, "unexpected quote inside unquoted field");
                quoted = true;
            } else if (ch == ',') {
                row.push_back(std::move(field));
                field.clear();
            } else if (ch == '\r') {
                // swallow; \r\n ends the row below, a stray \r is dropped
            } else if (ch == '\n') {
                row.push_back(std::move(field));
                return true;
            } else {
                field.push_back(ch);
            }
            c = in_.get();
        }
    }

    int line() const { return line_; }

private:
    std::istream& in_;
    int line_ = 1;
};

std::vector<std::string> split_predictions(const std::string& field) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : field) {
        if (c == ';') {
            if (!trim(cur).empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty()) out.push_back(cur);
    return out;
}

bool needs_quoting(const std::string& s) {
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
    return false;
}

void write_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

}  // namespace

std::vector<ResponseRecord> records_from_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> row;
    int line = 0;
    if (!reader.next_row(row, line)) throw CsvError(1, "missing header");
    if (row.size() != 4 || trim(row[0]) != "respondent_id" || trim(row[1]) != "question_id" ||
        trim(row[2]) != "answer" || trim(row[3]) != "predictions")
        throw CsvError(line, std::string("expected header ") + kHeader);

    std::vector<ResponseRecord> records;
    while (reader.next_row(row, line)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;  // blank line
        if (row.size() != 4)
            throw CsvError(line, "expected 4 fields, got " + std::to_string(row.size()));
        ResponseRecord r;
        r.respondent_id = trim(row[0]);
        r.question_id = trim(row[1]);
        r.answer = row[2];
        if (trim(r.answer).empty()) throw CsvError(line, "empty answer");
        r.predictions = split_predictions(row[3]);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ResponseRecord> records_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    return records_from_csv(in);
}

std::string records_to_csv(const std::vector<ResponseRecord>& records) {
    std::string out = kHeader;
    out.push_back('\n');
    for (const ResponseRecord& r : records) {
        write_field(out, r.respondent_id);
        out.push_back(',');
        write_field(out, r.question_id);
        out.push_back(',');
        write_field(out, r.answer);
        out.push_back(',');
        std::string preds;
        for (std::size_t i = 0; i < r.predictions.size(); ++i) {
            if (i) preds.push_back(';');
            preds += r.predictions[i];
        }
        write_field(out, preds);
        out.push_back('\n');
    }
    return out;
}

}  // namespace thinkrank
