// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "error.hpp"
#include "test_support.hpp"
#include "util.hpp"

using namespace corpusforge;
using cftest::TempDir;

namespace {

std::string line_for(const std::string& id, const std::string& text) {
    return R"({"id":")" + id + R"(","text":")" + text +
           R"(","source":"web","license_tier":"Tier1","category":"Web","synthetic_status":"NonSynthetic"})";
}

Document random_doc(std::mt19937_64& rng, std::size_t i) {
    Document d = cftest::make_doc("doc-" + std::to_string(i), cftest::random_text(rng, 1 + rng() % 40));
    if (rng() % 2) d.url = "https://site" + std::to_string(rng() % 7) + ".org/p/" + std::to_string(i);
    d.license_tier = kAllTiers[rng() % std::size(kAllTiers)];
    d.category = kAllCategories[rng() % std::size(kAllCategories)];
    d.synthetic_status = kAllStatuses[rng() % std::size(kAllStatuses)];
    if (rng() % 3 == 0) d.generator_provenance = GeneratorProvenance{"gen", "apache-2.0", "seed" + std::to_string(i)};
    if (rng() % 5 == 0) d.extra["lang"] = "en";
    if (rng() % 7 == 0) d.extra["meta"] = {{"nested", {1, 2, 3}}};
    if (rng() % 11 == 0) {
        d.drop_reason = "UnknownLicense";
        d.text.clear();
    }
    d.text += (rng() % 2) ? " caf\xc3\xa9 \xe2\x80\x94 \"quoted\"\n\ttab" : "";
    return d;
}

}  // namespace

TEST_SUITE("corpus_model") {

TEST_CASE("read_shard yields valid lines in file order") {
    TempDir dir;
    cftest::write_text(dir / "s.jsonl", line_for("a", "one") + "\n" + line_for("b", "two") + "\n" +
                                            line_for("c", "three") + "\n");
    auto got = read_shard(dir / "s.jsonl");
    REQUIRE(got.docs.size() == 3);
    CHECK(got.errors.empty());
    CHECK(got.docs[0].id == "a");
    CHECK(got.docs[1].id == "b");
    CHECK(got.docs[2].id == "c");
}

TEST_CASE("empty file is an empty stream") {
    TempDir dir;
    cftest::write_text(dir / "e.jsonl", "");
    auto got = read_shard(dir / "e.jsonl");
    CHECK(got.docs.empty());
    CHECK(got.errors.empty());
}

TEST_CASE("malformed line is reported and the stream continues") {
    TempDir dir;
    cftest::write_text(dir / "m.jsonl",
                       line_for("a", "one") + "\n{not json\n" + line_for("c", "three") + "\n");
    auto got = read_shard(dir / "m.jsonl");
    REQUIRE(got.docs.size() == 2);
    REQUIRE(got.errors.size() == 1);
    CHECK(got.errors[0].line_no == 2);
    CHECK(got.errors[0].code == ErrorCode::MalformedRecord);
    CHECK(got.docs[1].id == "c");
}

TEST_CASE("second occurrence of an id is an error") {
    TempDir dir;
    cftest::write_text(dir / "d.jsonl", line_for("a", "one") + "\n" + line_for("a", "two") + "\n");
    auto got = read_shard(dir / "d.jsonl");
    REQUIRE(got.docs.size() == 1);
    CHECK(got.docs[0].text == "one");
    REQUIRE(got.errors.size() == 1);
    CHECK(got.errors[0].code == ErrorCode::DuplicateId);
}

TEST_CASE("record-level validation") {
    CHECK_THROWS_AS(parse_document(R"({"id":"","text":"x","source":"s","license_tier":"Tier1","category":"Web","synthetic_status":"Mixed"})"),
                    Error);
    // Empty text only on records flagged for drop.
    CHECK_THROWS_AS(parse_document(R"({"id":"a","text":"","source":"s","license_tier":"Tier1","category":"Web","synthetic_status":"Mixed"})"),
                    Error);
    CHECK_NOTHROW(parse_document(R"({"id":"a","text":"","source":"s","license_tier":"Tier1","category":"Web","synthetic_status":"Mixed","drop_reason":"x"})"));
    CHECK_THROWS_AS(parse_document(R"({"id":"a","text":"x","source":"s","license_tier":"Tier9","category":"Web","synthetic_status":"Mixed"})"),
                    Error);
    CHECK_THROWS_AS(parse_document("[1,2]"), Error);
}

TEST_CASE("missing file is an I/O error") {
    TempDir dir;
    try {
        read_shard(dir / "absent.jsonl");
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("write then read round-trips every field") {
    TempDir dir;
    std::mt19937_64 rng(42);
    std::vector<Document> docs;
    for (std::size_t i = 0; i < 100; ++i) docs.push_back(random_doc(rng, i));
    for (const char* name : {"r.jsonl", "r.jsonl.gz"}) {
        auto manifest = write_shard(docs, dir / name);
        CHECK(manifest.record_count == 100);
        auto back = read_shard(dir / name);
        CHECK(back.errors.empty());
        REQUIRE(back.docs.size() == docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) CHECK(back.docs[i] == docs[i]);
        CHECK(check_manifest(read_manifest(manifest_path_for(dir / name)), back.docs).empty());
    }
}

TEST_CASE("unknown fields are preserved on passthrough") {
    TempDir dir;
    const std::string line =
        R"({"id":"a","text":"x","source":"s","license_tier":"Tier1","category":"Web","synthetic_status":"NonSynthetic","zz_custom":{"k":[1,"two"]}})";
    cftest::write_text(dir / "in.jsonl", line + "\n");
    auto docs = read_shard(dir / "in.jsonl").docs;
    write_shard(docs, dir / "out.jsonl");
    auto again = read_shard(dir / "out.jsonl").docs;
    REQUIRE(again.size() == 1);
    CHECK(again[0].extra["zz_custom"] == nlohmann::json::parse(R"({"k":[1,"two"]})"));
}

TEST_CASE("manifest of zero records") {
    TempDir dir;
    auto m = write_shard(std::vector<Document>{}, dir / "z.jsonl");
    CHECK(m.record_count == 0);
    CHECK(m.token_count == 0);
    CHECK(cftest::read_text(dir / "z.jsonl").empty());
}

TEST_CASE("token_count is the whitespace-token proxy") {
    TempDir dir;
    // Hand-counted: 20 + 30 + 7 = 57 maximal non-whitespace runs.
    std::vector<Document> docs = {
        cftest::make_doc("a", "a1 a2 a3 a4 a5 a6 a7 a8 a9 a10 a11 a12 a13 a14 a15 a16 a17 a18 a19 a20"),
        cftest::make_doc("b", "b1 b2 b3 b4 b5 b6 b7 b8 b9 b10\nb11 b12 b13 b14 b15 b16 b17 b18 b19 b20\n"
                              "b21 b22 b23 b24 b25 b26 b27 b28 b29 b30"),
        cftest::make_doc("c", "  It's\tfine,  really --\n\n ok . done  "),
    };
    auto m = write_shard(docs, dir / "t.jsonl");
    CHECK(m.token_count == 57);
}

TEST_CASE("record_count equals emitted lines") {
    TempDir dir;
    std::mt19937_64 rng(7);
    for (std::size_t n : {1u, 3u, 17u, 64u}) {
        std::vector<Document> docs;
        for (std::size_t i = 0; i < n; ++i) docs.push_back(random_doc(rng, i));
        auto m = write_shard(docs, dir / "c.jsonl");
        const std::string text = cftest::read_text(dir / "c.jsonl");
        CHECK(m.record_count == static_cast<std::uint64_t>(std::count(text.begin(), text.end(), '\n')));
    }
}

TEST_CASE("writer rejects duplicate ids") {
    TempDir dir;
    std::vector<Document> docs = {cftest::make_doc("a", "x"), cftest::make_doc("a", "y")};
    CHECK_THROWS_AS(write_shard(docs, dir / "dup.jsonl"), Error);
}

TEST_CASE("check_manifest detects inconsistent manifests") {
    std::vector<Document> docs = {cftest::make_doc("a", "one two"), cftest::make_doc("b", "three")};
    ShardManifest m;
    m.shard_id = "s";
    m.record_count = 2;
    m.token_count = 3;
    m.stage_history = {{"license_filter", "h1", 5, 4}, {"dedup", "h2", 4, 2}};
    CHECK(check_manifest(m, docs).empty());

    auto bad_tokens = m;
    bad_tokens.token_count = 4;
    CHECK_FALSE(check_manifest(bad_tokens, docs).empty());

    auto bad_chain = m;
    bad_chain.stage_history[1].records_in = 3;
    CHECK_FALSE(check_manifest(bad_chain, docs).empty());

    auto bad_count = m;
    bad_count.record_count = 3;
    CHECK_FALSE(check_manifest(bad_count, docs).empty());
}

TEST_CASE("manifest json round trip") {
    ShardManifest m;
    m.shard_id = "s";
    m.record_count = 9;
    m.token_count = 99;
    m.stage_history = {{"dedup", "abc", 10, 9}};
    m.extra["curation"] = {{"examples", 3}};
    CHECK(manifest_from_json(manifest_to_json(m)) == m);
}

}  // TEST_SUITE
