// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <random>
#include <set>

#include "error.hpp"
#include "hash.hpp"
#include "normalize.hpp"
#include "test_support.hpp"

using namespace corpusforge;

namespace {

using Tokens = std::vector<std::string>;

Tokens toks(std::string_view text, const StopwordSet& stop = {}) { return normalize_text(text, stop).tokens; }

NormalizedTokens from(Tokens t) {
    NormalizedTokens n;
    n.tokens = std::move(t);
    return n;
}

// Reference FNV-1a, written out independently of hash.hpp.
std::uint64_t ref_fnv(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string strip_ws(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

}  // namespace

TEST_SUITE("normalize") {

TEST_CASE("normalize_text applies NFKC, lowercase, split, stopwords") {
    CHECK(toks("The Cat SAT.", {"the"}) == Tokens{"cat", "sat"});
    CHECK(toks("").empty());
    CHECK(toks("THE the The", {"the"}).empty());
    // Compatibility forms fold: fullwidth letters and the "fi" ligature.
    CHECK(toks("\xef\xbc\xa1\xef\xbc\xa2\xef\xbc\xa3 \xef\xac\x81le") == Tokens{"abc", "file"});
    // Non-ASCII letters are alphanumeric runs; punctuation splits.
    CHECK(toks("Caf\xc3\xa9-au-lait, na\xc3\xafve!") == Tokens{"caf\xc3\xa9", "au", "lait", "na\xc3\xafve"});
    CHECK(toks("x1_y2") == Tokens{"x1", "y2"});
}

TEST_CASE("normalized tokens never contain stopwords, whitespace or empties") {
    std::mt19937_64 rng(3);
    const StopwordSet stop = default_stopwords();
    const std::string alphabet = "aAbB \t\n.,!?-_1\xc3\xa9";
    for (int iter = 0; iter < 500; ++iter) {
        std::string s;
        const std::size_t len = rng() % 80;
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        s += " The and OF";
        for (const auto& t : toks(s, stop)) {
            CHECK_FALSE(t.empty());
            CHECK(t.find_first_of(" \t\n") == std::string::npos);
            CHECK(stop.count(t) == 0);
        }
    }
}

TEST_CASE("normalize_text is idempotent") {
    std::mt19937_64 rng(11);
    const StopwordSet stop = default_stopwords();
    const char* samples[] = {"The QUICK brown fox -- jumps; over 12 lazy dogs!",
                             "\xef\xbc\xa8\xef\xbd\x85llo W\xc3\xb6rld \xe2\x85\xa0 \xe2\x91\xa0",
                             "a.b.c d,e,f", ""};
    for (const char* s : samples) {
        const Tokens once = toks(s, stop);
        std::string joined;
        for (const auto& t : once) joined += (joined.empty() ? "" : " ") + t;
        CHECK(toks(joined, stop) == once);
    }
    for (int iter = 0; iter < 200; ++iter) {
        const Tokens once = toks(cftest::random_text(rng, 30, 100, "Tok"), stop);
        std::string joined;
        for (const auto& t : once) joined += (joined.empty() ? "" : " ") + t;
        CHECK(toks(joined, stop) == once);
    }
}

TEST_CASE("FNV-1a matches published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("ngrams: window counts") {
    Tokens twelve, fifteen, same(20, "a");
    for (int i = 0; i < 12; ++i) twelve.push_back(cftest::token("t", i));
    for (int i = 0; i < 15; ++i) fifteen.push_back(cftest::token("t", i));
    CHECK(ngrams(from(twelve), 13).total_unique() == 0);
    auto h15 = ngrams(from(fifteen), 13);
    CHECK(h15.total_unique() == 3);
    CHECK(ngrams(from(same), 13).total_unique() == 1);
    CHECK_THROWS_AS(ngrams(from(fifteen), 0), Error);
}

TEST_CASE("ngram hash is FNV-1a of the space-joined window") {
    Tokens t = {"alpha", "beta", "gamma", "delta"};
    auto set = ngrams(from(t), 3);
    std::set<std::uint64_t> expect = {ref_fnv("alpha beta gamma"), ref_fnv("beta gamma delta")};
    CHECK(std::set<std::uint64_t>(set.hashes.begin(), set.hashes.end()) == expect);
    CHECK(set.contains(ref_fnv("alpha beta gamma")));
    CHECK_FALSE(set.contains(ref_fnv("alpha beta")));
}

TEST_CASE("ngram count is bounded by T - n + 1") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t T = rng() % 60;
        const std::size_t n = 1 + rng() % 15;
        Tokens t;
        for (std::size_t i = 0; i < T; ++i) t.push_back(cftest::token("v", rng() % 6));
        const auto set = ngrams(from(t), n);
        const std::size_t bound = T >= n ? T - n + 1 : 0;
        CHECK(set.total_unique() <= bound);
        CHECK(set.total_unique() == set.hashes.size());
        CHECK(std::is_sorted(set.hashes.begin(), set.hashes.end()));
    }
}

TEST_CASE("split_sentences") {
    using S = std::vector<std::string>;
    CHECK(split_sentences("A. B! C?") == S{"A.", "B!", "C?"});
    CHECK(split_sentences("no terminal punctuation") == S{"no terminal punctuation"});
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("line one\nline two.\n\n  ") == S{"line one", "line two."});
    // A period not followed by whitespace is not a boundary.
    CHECK(split_sentences("Version 1.2 is out. Yes") == S{"Version 1.2 is out.", "Yes"});
}

TEST_CASE("split_sentences preserves every non-whitespace character") {
    std::mt19937_64 rng(9);
    const std::string alphabet = "ab .!?\n\t1";
    for (int iter = 0; iter < 1000; ++iter) {
        std::string s;
        const std::size_t len = rng() % 60;
        for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
        std::string rejoined;
        for (const auto& part : split_sentences(s)) {
            CHECK_FALSE(part.empty());
            rejoined += part;
        }
        CHECK(strip_ws(rejoined) == strip_ws(s));
    }
}

TEST_CASE("boilerplate patterns exclude matching windows") {
    auto patterns = PatternSet::compile({R"(\banswer following question\b)"});
    CHECK(patterns.excludes("answer following question about"));
    CHECK_FALSE(patterns.excludes("question following answer"));

    const auto tokens = from({"answer", "following", "question", "about", "rivers"});
    auto filtered = ngrams(tokens, 4, &patterns);
    auto unfiltered = ngrams(tokens, 4);
    CHECK(unfiltered.total_unique() == 2);
    REQUIRE(filtered.total_unique() == 1);
    CHECK(filtered.hashes[0] == ref_fnv("following question about rivers"));

    // Empty pattern list and a pattern matching nothing are identities.
    PatternSet none = PatternSet::compile({});
    CHECK(ngrams(tokens, 4, &none).hashes == unfiltered.hashes);
    PatternSet never = PatternSet::compile({"zzzqqq"});
    CHECK(ngrams(tokens, 4, &never).hashes == unfiltered.hashes);
}

TEST_CASE("invalid pattern fails at load time") {
    try {
        PatternSet::compile({"ok", "(unclosed"});
        FAIL("expected InvalidPattern");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidPattern);
    }
    CHECK_THROWS_AS(PatternSet::from_file_contents("# comment\n[bad\n"), Error);
    CHECK(PatternSet::from_file_contents("# only a comment\n\n").empty());
}

TEST_CASE("fingerprinter is deterministic and config-sensitive") {
    const auto fp = TextFingerprinter::defaults();
    std::mt19937_64 rng(1);
    const std::string text = cftest::random_text(rng, 200);
    CHECK(fp.fingerprint(text).hashes == fp.fingerprint(text).hashes);
    CHECK(fp.fingerprint(text).total_unique() == 188);

    const TextFingerprinter other(default_stopwords(), PatternSet::defaults(), 8);
    CHECK(other.config_hash() != fp.config_hash());
    StopwordSet fewer = default_stopwords();
    fewer.erase("the");
    CHECK(TextFingerprinter(fewer, PatternSet::defaults()).config_hash() != fp.config_hash());
    CHECK(TextFingerprinter::defaults().config_hash() == fp.config_hash());
}

TEST_CASE("stopword file loading") {
    const auto s = load_stopwords("# header\nThe\n  and \n\nof\n");
    CHECK(s == StopwordSet{"the", "and", "of"});
    CHECK(default_stopwords().size() == 50);
}

}  // TEST_SUITE
