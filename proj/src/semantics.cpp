#include "tslam/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace tslam {

double semantic_cost(const SemanticObservation& obs, double lambda, double lambda_prime) {
    return lambda * (1.0 - obs.confidence) + obs.distance + lambda_prime * (1.0 + obs.cos_view);
}

SemanticState update_semantic(const SemanticState& state, const SemanticState& observed) {
    return observed.cost < state.cost ? observed : state;
}

std::vector<char32_t> utf8_decode(const std::string& s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < s.size()) {
            cp = (b0 & 0x1Fu) << 6 | (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < s.size()) {
            cp = (b0 & 0x0Fu) << 12 | (static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6 |
                 (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < s.size()) {
            cp = (b0 & 0x07u) << 18 | (static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 12 |
                 (static_cast<unsigned char>(s[i + 2]) & 0x3Fu) << 6 |
                 (static_cast<unsigned char>(s[i + 3]) & 0x3Fu);
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::vector<char32_t> canonical_codepoints(const std::string& s) {
    std::vector<char32_t> cps = utf8_decode(s);
    size_t begin = 0;
    size_t end = cps.size();
    auto is_space = [](char32_t c) { return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r'; };
    while (begin < end && is_space(cps[begin])) ++begin;
    while (end > begin && is_space(cps[end - 1])) --end;
    std::vector<char32_t> out(cps.begin() + static_cast<long>(begin),
                              cps.begin() + static_cast<long>(end));
    for (char32_t& c : out) {
        if (c >= U'a' && c <= U'z') c = c - U'a' + U'A';
    }
    return out;
}

namespace {
int edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    const size_t n = a.size();
    const size_t m = b.size();
    std::vector<int> prev(m + 1);
    std::vector<int> curr(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= n; ++i) {
        curr[0] = static_cast<int>(i);
        for (size_t j = 1; j <= m; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}
} // namespace

int levenshtein(const std::string& a, const std::string& b) {
    return edit_distance(canonical_codepoints(a), canonical_codepoints(b));
}

double string_similarity(const std::string& a, const std::string& b) {
    const std::vector<char32_t> ca = canonical_codepoints(a);
    const std::vector<char32_t> cb = canonical_codepoints(b);
    const auto max_len = static_cast<double>(std::max(ca.size(), cb.size()));
    if (max_len == 0.0) throw BothEmpty("cannot compare two empty strings");
    const double raw = (max_len - edit_distance(ca, cb)) / max_len;
    return std::max(raw, 1e-9);
}

double match_threshold(double best_score) {
    if (best_score >= 1.0) return 1.0;
    return std::max(2.0 / 3.0 * best_score, 0.35);
}

} // namespace tslam
