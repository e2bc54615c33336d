// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <random>

#include "error.hpp"
#include "mixture_report.hpp"
#include "test_support.hpp"
#include "util.hpp"

using namespace corpusforge;

namespace {

Document doc_of(std::string id, std::size_t tokens, Category cat, std::string source = "web") {
    std::string text;
    for (std::size_t i = 0; i < tokens; ++i) text += (i ? " " : "") + cftest::token("w", i);
    auto d = cftest::make_doc(std::move(id), text, std::move(source));
    d.category = cat;
    return d;
}

MixtureTaxonomy published_taxonomy() {
    return MixtureTaxonomy::from_json(
        nlohmann::json::parse(read_file(cftest::data_dir() / "mixture_taxonomy.json"), nullptr, true, true));
}

}  // namespace

TEST_SUITE("mixture_report") {

TEST_CASE("60/40 token split") {
    std::vector<Document> docs = {doc_of("a", 30, Category::Web), doc_of("b", 30, Category::Web),
                                  doc_of("c", 40, Category::Code)};
    auto s = summarize(docs);
    CHECK(s.totals().tokens == 100);
    CHECK(s.totals().docs == 3);
    double web = 0, code = 0;
    for (const auto& row : s.rows()) {
        if (row.label == "Web") web = static_cast<double>(row.counts.tokens) / s.totals().tokens;
        if (row.label == "Code") code = static_cast<double>(row.counts.tokens) / s.totals().tokens;
    }
    CHECK(web == doctest::Approx(0.6));
    CHECK(code == doctest::Approx(0.4));
    CHECK(s.fraction({"Web", LicenseTier::Tier1, SyntheticStatus::NonSynthetic}) == doctest::Approx(0.6));
    CHECK(render_summary(s).find("60.0% (1)") != std::string::npos);
}

TEST_CASE("empty corpus") {
    auto s = summarize(std::vector<Document>{});
    CHECK(s.totals() == MixtureCounts{});
    CHECK(s.fraction({"Web", LicenseTier::Tier1, SyntheticStatus::NonSynthetic}) == 0.0);
    CHECK_NOTHROW(render_summary(s));
    CHECK(render_summary(s).find("nan") == std::string::npos);
}

TEST_CASE("golden rendering of the published mixture table") {
    // Unique token counts as published; the stated total is injected, not
    // recomputed (the published rows sum to 212.643B).
    const std::pair<const char*, std::uint64_t> published[] = {{"Web", 9'314'000'000ULL},
                                                               {"Web rewrites", 7'924'000'000ULL},
                                                               {"Synthetic", 89'441'000'000ULL},
                                                               {"Code data", 18'640'000'000ULL},
                                                               {"Curated", 87'324'000'000ULL}};
    std::vector<MixtureRow> rows;
    for (const auto& [label, tokens] : published) rows.push_back({label, {0, tokens, tokens * 1000}});
    const std::uint64_t total = 211'341'000'000ULL;
    const std::string table = render_mixture_table(rows, total, total * 1000);
    const char* expected =
        "Data Source   Fraction of Training (with Repeats)  Unique Token Count\n"
        "Web                                      4.4% (1)              9.314B\n"
        "Web rewrites                             3.7% (1)              7.924B\n"
        "Synthetic                               42.3% (1)             89.441B\n"
        "Code data                                8.8% (1)             18.640B\n"
        "Curated                                 41.3% (1)             87.324B\n"
        "Total                                      100.0%            211.341B\n";
    CHECK(table == expected);
}

TEST_CASE("number rendering") {
    CHECK(render_percent(0.4407) == "44.1%");
    CHECK(render_percent(0.0) == "0.0%");
    CHECK(render_token_count(9'314'000'000ULL) == "9.314B");
    CHECK(render_token_count(999'999'999ULL) == "999,999,999");
    CHECK(render_token_count(0) == "0");
    CHECK(render_repeat(1000) == "1");
    CHECK(render_repeat(1200) == "1.2");
    CHECK(render_repeat(13800) == "13.8");
}

TEST_CASE("repeat factors weight the training share") {
    std::vector<Document> docs = {doc_of("a", 50, Category::Web, "webcrawl"), doc_of("b", 50, Category::Code, "stack")};
    auto repeats = RepeatPolicy::from_json(nlohmann::json::parse(R"({"stack": 3})"));
    auto s = summarize(docs, MixtureTaxonomy::by_category(), repeats);
    CHECK(s.totals().repeated_milli_tokens == 50 * 1000 + 50 * 3000);
    const std::string text = render_summary(s);
    CHECK(text.find("25.0% (1)") != std::string::npos);
    CHECK(text.find("75.0% (3)") != std::string::npos);
    CHECK_THROWS_AS(RepeatPolicy::from_json(nlohmann::json::parse(R"({"x": 1.2345})")), Error);
    CHECK_THROWS_AS(RepeatPolicy::from_json(nlohmann::json::parse(R"({"x": -1})")), Error);
}

TEST_CASE("invariants: exact cells, fractions sum to one, partitions add up") {
    std::mt19937_64 rng(4);
    std::vector<Document> docs;
    for (int i = 0; i < 500; ++i) {
        auto d = doc_of("d" + std::to_string(i), rng() % 60, kAllCategories[rng() % std::size(kAllCategories)],
                        "src" + std::to_string(rng() % 5));
        d.license_tier = kAllTiers[rng() % std::size(kAllTiers)];
        d.synthetic_status = kAllStatuses[rng() % std::size(kAllStatuses)];
        if (d.text.empty()) d.text = "x";
        docs.push_back(d);
    }
    auto whole = summarize(docs);
    MixtureCounts sum;
    double frac = 0;
    for (const auto& [key, counts] : whole.cells()) {
        sum += counts;
        frac += whole.fraction(key);
    }
    CHECK(sum == whole.totals());
    CHECK(frac == doctest::Approx(1.0).epsilon(1e-9));

    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t k = 2 + rng() % 4;
        std::vector<MixtureSummary> parts(k);
        for (const auto& d : docs) parts[rng() % k].add(d);
        MixtureSummary merged;
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) merged.merge(*it);
        CHECK(merged == whole);
    }

    for (auto dim : {MixtureDimension::Tier, MixtureDimension::Status}) {
        MixtureCounts dim_sum;
        for (const auto& row : whole.rows(dim)) dim_sum += row.counts;
        CHECK(dim_sum == whole.totals());
    }
}

TEST_CASE("taxonomy file") {
    const auto t = published_taxonomy();
    CHECK(t.rows.size() == 5);
    CHECK(t.row_for(doc_of("a", 1, Category::Math, "synth_math")) == "Synthetic");
    CHECK(t.row_for(doc_of("b", 1, Category::Encyclopedic, "wiki")) == "Curated");
    CHECK(t.row_for(doc_of("c", 1, Category::Web, "stackexchange")) == "Code data");
    CHECK_THROWS_AS(MixtureTaxonomy::from_json(nlohmann::json::parse(R"({"rows":["A"],"categories":{"Web":"A"}})")),
                    Error);
    CHECK_THROWS_AS(MixtureTaxonomy::from_json(nlohmann::json::parse(
                        R"({"rows":["A"],"categories":{"Web":"A","Code":"A","ReasoningInstruction":"A","Encyclopedic":"A","Math":"A","MiscCurated":"B"}})")),
                    Error);
}

TEST_CASE("compare") {
    std::vector<Document> a_docs = {doc_of("a", 30, Category::Web), doc_of("b", 70, Category::Code)};
    std::vector<Document> b_docs = {doc_of("a", 60, Category::Web), doc_of("b", 40, Category::Code),
                                    doc_of("c", 100, Category::Math)};
    auto a = summarize(a_docs), b = summarize(b_docs);

    auto same = compare(a, a);
    for (const auto& r : same) {
        CHECK(r.share_delta == 0.0);
        CHECK(r.token_delta == 0);
    }

    auto rows = compare(a, b);
    for (const auto& r : rows) {
        if (r.label == "Web") {
            CHECK(r.share_a == doctest::Approx(0.30));
            CHECK(r.share_b == doctest::Approx(0.30));
            CHECK(r.token_delta == 30);
        } else if (r.label == "Code") {
            CHECK(r.share_delta == doctest::Approx(0.20 - 0.70));
            CHECK(r.token_delta == -30);
        } else if (r.label == "Math") {
            CHECK(r.share_delta == doctest::Approx(0.5));
            CHECK(r.token_delta == 100);
        }
    }
    const std::string text = render_comparison(rows, "before", "after");
    CHECK(text.find("-50.0 pp") != std::string::npos);
    CHECK(text.find("+50.0 pp") != std::string::npos);

    MixtureSummary other(published_taxonomy());
    CHECK_THROWS_AS(compare(a, other), Error);
}

TEST_CASE("summarize_shards validates its inputs") {
    cftest::TempDir dir;
    std::vector<Document> docs = {doc_of("a", 10, Category::Web), doc_of("b", 5, Category::Code)};
    write_shard(docs, dir / "s.jsonl");
    auto s = summarize_shards({dir / "s.jsonl"});
    CHECK(s == summarize(docs));

    cftest::write_text(dir / "bad.jsonl", "{oops\n");
    CHECK_THROWS_AS(summarize_shards({dir / "bad.jsonl"}), Error);

    // Manifest no longer matching the records.
    auto m = read_manifest(manifest_path_for(dir / "s.jsonl"));
    m.token_count += 1;
    write_manifest(m, manifest_path_for(dir / "s.jsonl"));
    CHECK_THROWS_AS(summarize_shards({dir / "s.jsonl"}), Error);
}

}  // TEST_SUITE
