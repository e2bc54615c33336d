// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <random>

#include "safety_quality.hpp"
#include "test_support.hpp"

using namespace corpusforge;

namespace {

std::string base64(const std::vector<unsigned char>& bytes) {
    static const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        for (int s = 18; s >= 0; s -= 6) out += alphabet[(v >> s) & 63];
    }
    if (const std::size_t rest = bytes.size() - i) {
        unsigned v = bytes[i] << 16;
        if (rest == 2) v |= bytes[i + 1] << 8;
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += rest == 2 ? alphabet[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

std::string random_base64(std::mt19937_64& rng, std::size_t chars) {
    std::string out;
    while (out.size() < chars) {
        std::vector<unsigned char> bytes(48);
        for (auto& b : bytes) b = static_cast<unsigned char>(rng());
        out += base64(bytes);
    }
    out.resize(chars);
    return out;
}

// English filler of exactly n characters, never containing a base64 run
// of more than 12 characters.
std::string filler(std::size_t n) {
    static const std::string words = "the river runs past old mills and quiet farms, ";
    std::string out;
    while (out.size() < n) out += words;
    out.resize(n);
    return out;
}

SafetyRuleSet test_rules() {
    return SafetyRuleSet::from_contents("# test list\nbadword\nworse\n", "\\bliving people\\b\n\\(\\d{4} film\\)\n");
}

Document wiki_doc(std::string id, std::string title) {
    auto d = cftest::make_doc(std::move(id), "Some encyclopedic text.", "wikipedia-en");
    d.extra["title"] = std::move(title);
    return d;
}

std::vector<Document> cluster_with_first_lines(std::size_t n, const std::vector<std::string>& first) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < n; ++i) {
        docs.push_back(cftest::make_doc("d" + std::to_string(i),
                                        first[i % first.size()] + "\nbody line " + std::to_string(i) +
                                            "\nmore body " + std::to_string(i) + "\nend " + std::to_string(i)));
    }
    return docs;
}

}  // namespace

TEST_SUITE("safety_quality") {

TEST_CASE("safety_filter: keyword hits") {
    const auto rules = test_rules();
    auto verdict = safety_filter(cftest::make_doc("a", "A sentence with BadWord in it."), rules);
    CHECK_FALSE(verdict.keep);
    CHECK(verdict.reason == "UnsafeKeyword(rule=1)");
    CHECK(safety_filter(cftest::make_doc("b", "A clean sentence."), rules).keep);
    // Tokens, not substrings.
    CHECK(safety_filter(cftest::make_doc("c", "badwords and unworsened"), rules).keep);

    auto strict = rules;
    strict.hit_threshold = 2;
    CHECK(safety_filter(cftest::make_doc("d", "badword once"), strict).keep);
    CHECK_FALSE(safety_filter(cftest::make_doc("e", "badword and worse"), strict).keep);
}

TEST_CASE("safety_filter: wikipedia exclusions") {
    const auto rules = test_rules();
    auto v = safety_filter(wiki_doc("w1", "Category:Living people"), rules);
    CHECK_FALSE(v.keep);
    CHECK(v.reason == "WikipediaExclusion(rule=1)");
    CHECK_FALSE(safety_filter(wiki_doc("w2", "Heat (1995 film)"), rules).keep);
    CHECK(safety_filter(wiki_doc("w3", "Photosynthesis"), rules).keep);
    // Markers apply only to Wikipedia-sourced documents.
    auto other = wiki_doc("w4", "Category:Living people");
    other.source = "news";
    CHECK(safety_filter(other, rules).keep);
    // Categories array and URL host also count.
    auto by_url = cftest::make_doc("w5", "text", "misc", std::string("https://en.wikipedia.org/wiki/Someone"));
    by_url.extra["categories"] = {"Births in 1980", "Living people"};
    CHECK_FALSE(safety_filter(by_url, rules).keep);
}

TEST_CASE("safety rule file validation") {
    CHECK_THROWS(SafetyRuleSet::from_contents("two words\n", ""));
    CHECK_THROWS(SafetyRuleSet::from_contents("Upper\n", ""));
    CHECK_THROWS(SafetyRuleSet::from_contents("ok\n", "(unclosed\n"));
    CHECK_FALSE(SafetyRuleSet::defaults().unsafe_keywords.empty());
}

TEST_CASE("detect_base64") {
    std::mt19937_64 rng(99);
    const std::string blob = random_base64(rng, 300);
    CHECK_FALSE(detect_base64(filler(200) + blob + filler(200)).keep);
    CHECK(detect_base64(filler(200) + blob + filler(200)).reason == "Base64");

    // 1000 characters, three 70-character runs: 210 / 1000 = 21% > 20%.
    std::string doc = filler(230) + " " + random_base64(rng, 70) + " " + filler(230) + " " + random_base64(rng, 70) +
                      " " + filler(230) + " " + random_base64(rng, 70) + " ";
    doc += filler(1000 - doc.size());
    REQUIRE(doc.size() == 1000);
    CHECK_FALSE(detect_base64(doc).keep);

    // Two such runs: 14% stays.
    std::string two = filler(400) + " " + random_base64(rng, 70) + " " + filler(400) + " " + random_base64(rng, 70) + " ";
    two += filler(1000 - two.size());
    CHECK(detect_base64(two).keep);

    CHECK(detect_base64("Plain English prose, with punctuation; and numbers like 42.").keep);
    // A long run of letters only (no digits) is not base64-like.
    CHECK(detect_base64(std::string(400, 'a')).keep);
    // A 255-character run alone is below the long-run threshold but covers
    // the whole document.
    CHECK_FALSE(detect_base64(random_base64(rng, 255)).keep);
}

TEST_CASE("strip_header_footer: examples") {
    auto out = strip_header_footer(cluster_with_first_lines(10, {"Home | Search"}));
    REQUIRE(out.size() == 10);
    for (const auto& d : out) CHECK(d.text.rfind("body line", 0) == 0);

    auto small = cluster_with_first_lines(5, {"Home | Search"});
    CHECK(strip_header_footer(small) == small);

    std::vector<std::string> unique;
    for (int i = 0; i < 10; ++i) unique.push_back("Unique header " + std::to_string(i));
    auto distinct = cluster_with_first_lines(10, unique);
    CHECK(strip_header_footer(distinct) == distinct);
}

TEST_CASE("strip_header_footer: footers and the 50% bar") {
    std::vector<Document> docs;
    for (int i = 0; i < 12; ++i) {
        std::string text = "title " + std::to_string(i) + "\ncontent " + std::to_string(i);
        if (i < 6) text += "\nCopyright Example Site";
        docs.push_back(cftest::make_doc("f" + std::to_string(i), text));
    }
    auto out = strip_header_footer(docs);
    for (int i = 0; i < 6; ++i) CHECK(out[i].text == "title " + std::to_string(i) + "\ncontent " + std::to_string(i));

    // 5 of 12 falls under ceil(0.5 * 12) = 6.
    docs.pop_back();
    docs.push_back(cftest::make_doc("f11", "title 11\ncontent 11"));
    docs[5].text = "title 5\ncontent 5";
    CHECK(strip_header_footer(docs) == docs);
}

TEST_CASE("strip_header_footer invariants") {
    std::mt19937_64 rng(31);
    const std::vector<std::string> pool = {"Home | Search", "Menu", "Login", "Footer", "Share this"};
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<Document> docs;
        const std::size_t n = 10 + rng() % 15;
        for (std::size_t i = 0; i < n; ++i) {
            std::string text;
            const std::size_t lines = 1 + rng() % 9;
            for (std::size_t l = 0; l < lines; ++l) {
                if (l) text += '\n';
                text += (rng() % 2) ? pool[rng() % pool.size()] : "body " + std::to_string(rng() % 1000);
            }
            docs.push_back(cftest::make_doc("d" + std::to_string(i), text));
        }
        auto once = strip_header_footer(docs);
        REQUIRE(once.size() == docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) CHECK(once[i].text.size() <= docs[i].text.size());
        // Idempotent once run to its fixpoint.
        HeaderFooterOptions unbounded;
        unbounded.max_passes = 1000;
        auto fixed = strip_header_footer(docs, unbounded);
        CHECK(strip_header_footer(fixed, unbounded) == fixed);
    }
}

}  // TEST_SUITE
