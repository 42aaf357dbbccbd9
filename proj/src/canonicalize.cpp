#include "thinkrank/canonicalize.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace thinkrank {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string fold(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// "50%" -> "0.5": fires only when the whole string is a signed decimal
/// followed by '%'. Output uses the shortest round-trip representation, so
/// canonical forms are stable fixed points.
bool percent_to_fraction(const std::string& s, std::string& out) {
    if (s.size() < 2 || s.back() != '%') return false;
    const std::string num = s.substr(0, s.size() - 1);
    std::size_t i = 0;
    if (num[i] == '+' || num[i] == '-') ++i;
    if (i == num.size()) return false;
    bool digits = false, dot = false;
    for (; i < num.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(num[i]))) {
            digits = true;
        } else if (num[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    if (!digits) return false;
    const double value = std::strtod(num.c_str(), nullptr) / 100.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.assign(buf, res.ptr);
    return true;
}

}  // namespace

void CanonicalizationMap::add_synonym(const std::string& raw, const std::string& canonical) {
    // keys are matched after trimming/folding/rules, values are kept verbatim
    std::string key = trim(raw);
    if (case_fold) key = fold(key);
    std::string ruled;
    if (numeric_percent_to_fraction && percent_to_fraction(key, ruled)) key = ruled;
    synonyms[key] = trim(canonical);
    fixed_points.insert(trim(canonical));
}

std::string canonicalize(const std::string& raw, const CanonicalizationMap& map) {
    std::string s = trim(raw);
    // canonical forms pass through untouched; this keeps the map idempotent
    // when a synonym target carries case the folding pass would rewrite
    if (map.fixed_points.count(s)) return s;
    if (map.case_fold) s = fold(s);
    if (map.numeric_percent_to_fraction) {
        std::string ruled;
        if (percent_to_fraction(s, ruled)) s = std::move(ruled);
    }
    const auto it = map.synonyms.find(s);
    if (it != map.synonyms.end()) return it->second;
    return s;
}

CanonicalizationMap canonicalization_from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CanonicalizationMap map;
    if (j.contains("case_fold")) map.case_fold = j.at("case_fold").get<bool>();
    if (j.contains("numeric_percent_to_fraction"))
        map.numeric_percent_to_fraction = j.at("numeric_percent_to_fraction").get<bool>();
    if (j.contains("synonyms")) {
        if (!j.at("synonyms").is_object())
            throw std::invalid_argument("synonyms: expected an object of raw -> canonical strings");
        for (const auto& [key, value] : j.at("synonyms").items()) {
            if (!value.is_string())
                throw std::invalid_argument("synonyms['" + key + "']: not a string");
            map.add_synonym(key, value.get<std::string>());
        }
    }
    return map;
}

CanonicalizationMap load_canonicalization(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open canonicalization file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return canonicalization_from_json_text(ss.str());
}

}  // namespace thinkrank
