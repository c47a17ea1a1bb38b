#include "tslam/semantics.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

using namespace tslam;

namespace {

// Exhaustive recursive edit distance, the brute-force oracle.
int slow_edit(const std::string& a, const std::string& b, size_t i = 0, size_t j = 0) {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    if (a[i] == b[j]) return slow_edit(a, b, i + 1, j + 1);
    return 1 + std::min({slow_edit(a, b, i + 1, j), slow_edit(a, b, i, j + 1),
                         slow_edit(a, b, i + 1, j + 1)});
}

std::vector<std::string> all_strings(int max_len) {
    const char alphabet[] = {'a', 'b', 'c'};
    std::vector<std::string> out = {""};
    std::vector<std::string> frontier = {""};
    for (int l = 0; l < max_len; ++l) {
        std::vector<std::string> next;
        for (const std::string& s : frontier)
            for (char c : alphabet) next.push_back(s + c);
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

} // namespace

TEST_CASE("semantic cost matches the paper constants") {
    SemanticObservation head_on{"CAFE", 1.0, 2.0, -1.0};
    CHECK(semantic_cost(head_on) == doctest::Approx(2.0));
    SemanticObservation oblique{"CAFE", 0.8, 5.0, -0.5};
    CHECK(semantic_cost(oblique) == doctest::Approx(50.0));
}

TEST_CASE("semantic cost is monotone in its inputs") {
    const SemanticObservation base{"X", 0.8, 3.0, -0.5};
    SemanticObservation better = base;
    better.confidence = 0.9;
    CHECK(semantic_cost(better) < semantic_cost(base));
    SemanticObservation farther = base;
    farther.distance = 4.0;
    CHECK(semantic_cost(farther) > semantic_cost(base));
    SemanticObservation worse_view = base;
    worse_view.cos_view = 0.0;
    CHECK(semantic_cost(worse_view) > semantic_cost(base));
}

TEST_CASE("update keeps the smaller cost and incumbent on ties") {
    const SemanticState incumbent{"KEEP", 10.0};
    const SemanticState worse{"DROP", 50.0};
    const SemanticState better{"TAKE", 2.0};
    CHECK(update_semantic(incumbent, worse).text == "KEEP");
    CHECK(update_semantic(incumbent, better).text == "TAKE");
    const SemanticState tie{"TIE", 10.0};
    CHECK(update_semantic(incumbent, tie).text == "KEEP");
}

TEST_CASE("folding any observation order reaches the minimum cost") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<SemanticState> obs;
    for (int i = 0; i < 12; ++i) obs.push_back({"s" + std::to_string(i), u(rng)});
    double min_cost = obs.front().cost;
    for (const auto& o : obs) min_cost = std::min(min_cost, o.cost);
    for (int perm = 0; perm < 20; ++perm) {
        std::shuffle(obs.begin(), obs.end(), rng);
        SemanticState state = obs.front();
        for (const auto& o : obs) state = update_semantic(state, o);
        CHECK(state.cost == doctest::Approx(min_cost));
        // idempotent
        CHECK(update_semantic(state, state).cost == doctest::Approx(min_cost));
    }
}

TEST_CASE("levenshtein handles the seed/seek example") {
    CHECK(levenshtein("seed", "seek") == 1);
    CHECK(levenshtein("same", "same") == 0);
    CHECK(levenshtein("", "abc") == 3);
}

TEST_CASE("levenshtein matches the exhaustive oracle on short strings") {
    const std::vector<std::string> strings = all_strings(4);
    for (const std::string& a : strings) {
        for (const std::string& b : strings) {
            CHECK(levenshtein(a, b) == slow_edit(a, b));
        }
    }
}

TEST_CASE("levenshtein behaves like a metric") {
    std::mt19937 rng(9);
    const std::vector<std::string> pool = all_strings(6);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 300; ++i) {
        const std::string& a = pool[pick(rng)];
        const std::string& b = pool[pick(rng)];
        const std::string& c = pool[pick(rng)];
        CHECK(levenshtein(a, b) == levenshtein(b, a));
        CHECK((levenshtein(a, b) == 0) == (a == b));
        CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
    }
}

TEST_CASE("string similarity follows the normalized distance") {
    CHECK(string_similarity("seed", "seek") == doctest::Approx(0.75));
    CHECK(string_similarity("LOOP", "LOOP") == doctest::Approx(1.0));
    CHECK(string_similarity("", "abc") == doctest::Approx(1e-9));
    CHECK_THROWS_AS(string_similarity("", "  "), BothEmpty);
}

TEST_CASE("similarity is case-insensitive and trims whitespace") {
    CHECK(string_similarity("Cafe", "CAFE") == doctest::Approx(1.0));
    CHECK(string_similarity("  exit ", "EXIT") == doctest::Approx(1.0));
    CHECK(levenshtein("Seed", "SEEK") == 1);
}

TEST_CASE("unicode strings are compared per code point") {
    // two three-codepoint strings, one substitution
    CHECK(levenshtein("日本語", "日本話") == 1);
    CHECK(string_similarity("日本語", "日本話") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("match threshold reproduces the adaptive rule") {
    CHECK(match_threshold(1.0) == doctest::Approx(1.0));
    CHECK(match_threshold(0.75) == doctest::Approx(0.5));
    CHECK(match_threshold(0.40) == doctest::Approx(0.35));
    CHECK(match_threshold(0.525) == doctest::Approx(0.35));
    CHECK(match_threshold(0.9) == doctest::Approx(0.6));
}
