// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dedup.hpp"
#include "error.hpp"
#include "normalize.hpp"
#include "test_support.hpp"

using namespace corpusforge;

namespace {

const StopwordSet& stop() {
    static const StopwordSet s = default_stopwords();
    return s;
}

std::set<std::string> ids(const std::vector<Document>& docs) {
    std::set<std::string> out;
    for (const auto& d : docs) out.insert(d.id);
    return out;
}

std::string repeat_sentence(const std::string& s, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += (i ? " " : "") + s;
    return out;
}

}  // namespace

TEST_SUITE("dedup") {

TEST_CASE("prefix_dedup keeps the smallest id") {
    std::mt19937_64 rng(1);
    const std::string shared = cftest::random_text(rng, 32);
    std::vector<Document> docs = {cftest::make_doc("b", shared + " tail one"),
                                  cftest::make_doc("a", shared + " different tail")};
    auto r = prefix_dedup(docs, "web", stop());
    REQUIRE(r.kept.size() == 1);
    CHECK(r.kept[0].id == "a");
    REQUIRE(r.dropped.size() == 1);
    CHECK(r.dropped[0] == DropRecord{"b", "dedup", "DupPrefix", std::string("a")});
}

TEST_CASE("prefix key uses min(|tokens|, 32)") {
    // Five tokens vs. a longer doc that starts with them: keys differ
    // because the longer doc hashes more tokens.
    const std::string five = "alpha1 beta2 gamma3 delta4 epsilon5";
    auto short_doc = cftest::make_doc("x", five);
    auto same_short = cftest::make_doc("y", "Alpha1, beta2; GAMMA3 delta4 -- epsilon5!");
    auto r = prefix_dedup({short_doc, same_short}, "web", stop());
    CHECK(ids(r.kept) == std::set<std::string>{"x"});

    auto longer = cftest::make_doc("z", five + " zeta6");
    CHECK(prefix_dedup({short_doc, longer}, "web", stop()).kept.size() == 2);

    // Differences after token 32 are ignored.
    std::mt19937_64 rng(2);
    const std::string head = cftest::random_text(rng, 32);
    auto r2 = prefix_dedup({cftest::make_doc("p", head + " one"), cftest::make_doc("q", head + " two")}, "web", stop());
    CHECK(r2.kept.size() == 1);
    // Stopwords do not count toward the prefix.
    auto r3 = prefix_dedup({cftest::make_doc("s", "the " + head), cftest::make_doc("t", head + " extra")}, "web", stop());
    CHECK(r3.kept.size() == 1);
}

TEST_CASE("all-distinct prefixes are an identity") {
    std::mt19937_64 rng(3);
    std::vector<Document> docs;
    for (int i = 0; i < 200; ++i) docs.push_back(cftest::make_doc("d" + std::to_string(i), cftest::random_text(rng, 40)));
    auto r = prefix_dedup(docs, "web", stop());
    CHECK(r.kept == docs);
    CHECK(r.dropped.empty());
}

TEST_CASE("token-less documents are never merged") {
    auto r = prefix_dedup({cftest::make_doc("a", "the and of"), cftest::make_doc("b", "..."),
                           cftest::make_doc("c", "the")},
                          "web", stop());
    CHECK(r.kept.size() == 3);
}

TEST_CASE("scope violations are refused") {
    std::vector<Document> docs = {cftest::make_doc("a", "one two", "web"), cftest::make_doc("b", "three", "code")};
    try {
        prefix_dedup(docs, "web", stop());
        FAIL("expected ScopeViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ScopeViolation);
    }
    PrefixDedupIndex a("web", stop()), b("code", stop());
    CHECK_THROWS_AS(a.merge(b), Error);
}

TEST_CASE("prefix_dedup is order and partition independent") {
    std::mt19937_64 rng(4);
    std::vector<std::string> heads;
    for (int i = 0; i < 40; ++i) heads.push_back(cftest::random_text(rng, 32));
    std::vector<Document> docs;
    for (int i = 0; i < 600; ++i) {
        docs.push_back(cftest::make_doc("d" + std::to_string(rng() % 1000000) + "_" + std::to_string(i),
                                        heads[rng() % heads.size()] + " " + cftest::random_text(rng, 5)));
    }
    const auto base = ids(prefix_dedup(docs, "web", stop()).kept);
    CHECK(base.size() == 40);
    for (int p = 0; p < 5; ++p) {
        std::shuffle(docs.begin(), docs.end(), rng);
        CHECK(ids(prefix_dedup(docs, "web", stop(), kDefaultPrefixTokens, 1 + p).kept) == base);
    }
    // Manual partition into indexes merged in reverse order.
    std::vector<PrefixDedupIndex> parts;
    for (int k = 0; k < 4; ++k) parts.emplace_back("web", stop());
    for (std::size_t i = 0; i < docs.size(); ++i) parts[rng() % 4].add(docs[i]);
    PrefixDedupIndex merged("web", stop());
    for (int k = 3; k >= 0; --k) merged.merge(parts[k]);
    std::set<std::string> winners;
    for (const auto& d : docs) winners.insert(*merged.winner_for(d));
    CHECK(winners == base);
}

TEST_CASE("sentence_dedup boundary") {
    auto four = sentence_dedup(cftest::make_doc("a", repeat_sentence("Same thing.", 4)));
    CHECK_FALSE(four.dropped);
    CHECK(four.stats.total == 4);
    CHECK(four.stats.unique == 1);
    CHECK(four.stats.dup_rate() == doctest::Approx(0.75));
    CHECK(four.doc.text == "Same thing.");

    auto five = sentence_dedup(cftest::make_doc("b", repeat_sentence("Same thing.", 5)));
    CHECK(five.dropped);
    CHECK(five.stats.dup_rate() == doctest::Approx(0.8));
    CHECK(five.doc.drop_reason == std::optional<std::string>("HighRepetition"));

    auto distinct = cftest::make_doc("c", "One. Two! Three?");
    auto r = sentence_dedup(distinct);
    CHECK_FALSE(r.dropped);
    CHECK(r.doc == distinct);
}

TEST_CASE("sentence_dedup rebuild keeps first occurrences in order") {
    auto r = sentence_dedup(cftest::make_doc("a", "Alpha. Beta!  Alpha. Gamma? Beta!"));
    CHECK_FALSE(r.dropped);
    CHECK(r.doc.text == "Alpha. Beta! Gamma?");
    CHECK(sentence_dup_stats("").dup_rate() == 0.0);
}

TEST_CASE("sentence_dedup is idempotent and leaves distinct sentences") {
    std::mt19937_64 rng(6);
    const std::vector<std::string> pool = {"Alpha.", "Beta!", "Gamma?", "Delta.", "Eps", "Zeta."};
    for (int iter = 0; iter < 500; ++iter) {
        std::string text;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) text += (i ? ((rng() % 4 == 0) ? "\n" : " ") : "") + pool[rng() % pool.size()];
        auto once = sentence_dedup(cftest::make_doc("d", text));
        if (once.dropped) continue;
        const auto parts = split_sentences(once.doc.text);
        CHECK(std::set<std::string>(parts.begin(), parts.end()).size() == parts.size());
        auto twice = sentence_dedup(once.doc);
        CHECK_FALSE(twice.dropped);
        CHECK(twice.doc.text == once.doc.text);
    }
}

TEST_CASE("drop records serialize with optional winner") {
    CHECK(serialize_drop_record({"b", "dedup", "DupPrefix", std::string("a")}) ==
          R"({"doc_id":"b","stage":"dedup","reason":"DupPrefix","winner_id":"a"})");
    CHECK(serialize_drop_record({"b", "dedup", "HighRepetition", std::nullopt}) ==
          R"({"doc_id":"b","stage":"dedup","reason":"HighRepetition"})");
}

}  // TEST_SUITE
