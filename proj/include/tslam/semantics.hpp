#ifndef TSLAM_SEMANTICS_HPP
#define TSLAM_SEMANTICS_HPP

#include "tslam/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tslam {

/// Meaning string with its quality cost; the map keeps the minimum-cost meaning.
struct SemanticState {
    std::string text;
    double cost = 0.0;
};

/// Per-frame recognition of a text object.
struct SemanticObservation {
    std::string text;
    double confidence = 1.0; // in [0, 1]
    double distance = 0.0;   // text center to camera center (m)
    double cos_view = -1.0;  // o.n / (|o||n|); -1 is head-on
};

constexpr double kMeaningWeight = 200.0;  // lambda
constexpr double kViewWeight = 10.0;      // lambda'

/// lambda (1 - confidence) + distance + lambda' (1 + cos_view). Lower is better.
double semantic_cost(const SemanticObservation& obs, double lambda = kMeaningWeight,
                     double lambda_prime = kViewWeight);

/// Keeps the state with the smaller cost; ties keep the incumbent.
SemanticState update_semantic(const SemanticState& state, const SemanticState& observed);

/// Decodes UTF-8 into Unicode scalar values; invalid bytes become U+FFFD.
std::vector<char32_t> utf8_decode(const std::string& s);

/// Canonical comparison form: trimmed, ASCII case-folded code points.
std::vector<char32_t> canonical_codepoints(const std::string& s);

/// Minimum number of single-character insertions, deletions and substitutions.
int levenshtein(const std::string& a, const std::string& b);

/// (max(|a|,|b|) - d(a,b)) / max(|a|,|b|), clamped to [1e-9, 1].
double string_similarity(const std::string& a, const std::string& b);

/// Adaptive match threshold from the best score: 1.0 on an exact match,
/// otherwise max(2/3 s_max, 0.35).
double match_threshold(double best_score);

} // namespace tslam

#endif
