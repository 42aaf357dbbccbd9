#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>

namespace thinkrank {

/// Answer-merging rules. Canonicalization is idempotent: outputs of the
/// synonym table are fixed points and are returned unchanged on re-entry,
/// even when case folding would otherwise rewrite them.
struct CanonicalizationMap {
    bool case_fold = true;
    bool numeric_percent_to_fraction = true;  // "50%" -> "0.5"
    std::unordered_map<std::string, std::string> synonyms;  // keys matched after fold/rules
    std::unordered_set<std::string> fixed_points;           // the synonym values

    void add_synonym(const std::string& raw, const std::string& canonical);
};

std::string canonicalize(const std::string& raw, const CanonicalizationMap& map);

/// Map file (JSON):
/// { "numeric_percent_to_fraction": true, "case_fold": true,
///   "synonyms": {"yalu river": "Yalu"} }
CanonicalizationMap canonicalization_from_json_text(const std::string& text);
CanonicalizationMap load_canonicalization(const std::string& path);

}  // namespace thinkrank
