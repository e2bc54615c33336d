// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include <doctest.h>

#include <cstdlib>
#include <random>
#include <set>

#include "decontam.hpp"
#include "error.hpp"
#include "pipeline.hpp"
#include "test_support.hpp"

using namespace corpusforge;
using cftest::TempDir;
namespace fs = std::filesystem;

namespace {

// 21 records with known fates under the default stages:
//   license_filter drops 3 restrictive + 2 unknown-license   -> 16
//   safety_quality drops 2 unsafe-keyword                     -> 14
//   dedup drops 3 prefix duplicates + 1 repetitive            -> 10
std::vector<Document> fixture(std::mt19937_64& rng) {
    std::vector<Document> docs;
    auto gov = [](int i) { return std::string("https://www.usda.gov/page/") + std::to_string(i); };
    std::vector<std::string> bodies;
    for (int i = 0; i < 10; ++i) {
        bodies.push_back(cftest::random_text(rng, 40));
        docs.push_back(cftest::make_doc("a" + std::to_string(i), bodies.back(), "web", gov(i)));
    }
    for (int i = 0; i < 3; ++i)
        docs.push_back(cftest::make_doc("r" + std::to_string(i), cftest::random_text(rng, 30) + " All rights reserved.",
                                        "web", gov(100 + i)));
    for (int i = 0; i < 2; ++i)
        docs.push_back(cftest::make_doc("u" + std::to_string(i), cftest::random_text(rng, 30), "web",
                                        std::string("https://example.com/") + std::to_string(i)));
    for (int i = 0; i < 2; ++i)
        docs.push_back(cftest::make_doc("s" + std::to_string(i), cftest::random_text(rng, 30) + " porn",
                                        "web", gov(200 + i)));
    for (int i = 0; i < 3; ++i)
        docs.push_back(cftest::make_doc("z" + std::to_string(i), bodies[0] + " extra tail " + std::to_string(i), "web",
                                        gov(300 + i)));
    docs.push_back(cftest::make_doc("x0", "Same words again. Same words again. Same words again. Same words again. "
                                          "Same words again.",
                                    "web", gov(400)));
    for (auto& d : docs) d.license_tier = LicenseTier::Unknown;
    return docs;
}

fs::path write_config(const TempDir& dir, const std::string& body) {
    cftest::write_text(dir / "pipeline.json", body);
    return dir / "pipeline.json";
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(cftest::read_text(p)); }

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("default stages: known drop counts and monotone history") {
    TempDir dir;
    std::mt19937_64 rng(1);
    fs::create_directories(dir / "in");
    write_shard(fixture(rng), dir / "in" / "shard0.jsonl");
    auto cfg_path = write_config(dir, R"({"inputs": "in/*.jsonl", "output_dir": "out"})");

    auto result = run_pipeline_file(cfg_path);
    INFO(result.message);
    REQUIRE(result.exit_code == kExitOk);
    REQUIRE(result.manifests.size() == 1);
    const auto& h = result.manifests[0].stage_history;
    REQUIRE(h.size() == 5);
    CHECK(h[0].stage_name == "license_filter");
    CHECK(h[0].records_in == 21);
    CHECK(h[0].records_out == 16);
    CHECK(h[1].records_out == 14);
    CHECK(h[2].records_out == 10);
    CHECK(h[3].stage_name == "curation");
    CHECK(h[4].stage_name == "report");
    for (std::size_t k = 0; k + 1 < h.size(); ++k) CHECK(h[k].records_out == h[k + 1].records_in);
    for (std::size_t k = 0; k < 3; ++k) CHECK(h[k].records_out <= h[k].records_in);

    // Every drop is logged exactly once.
    CHECK(result.drops.size() == 11);
    std::set<std::string> dropped;
    for (const auto& d : result.drops) CHECK(dropped.insert(d.doc_id).second);
    CHECK(dropped.count("r0"));
    CHECK(dropped.count("u1"));
    CHECK(dropped.count("s0"));
    CHECK(dropped.count("z2"));
    CHECK(dropped.count("x0"));
    CHECK_FALSE(dropped.count("a0"));

    const auto log = cftest::read_text(dir / "out" / "drops.jsonl");
    CHECK(std::count(log.begin(), log.end(), '\n') == 11);
    auto run = read_json(dir / "out" / "run_manifest.json");
    CHECK(run["status"] == "ok");
    CHECK(run["dropped"] == 11);
    CHECK(fs::exists(dir / "out" / "mixture_report.txt"));
    auto manifest = read_json(dir / "out" / "shard0.jsonl.manifest");
    CHECK(manifest["pipeline_config_hash"] == run["config_hash"]);
    CHECK(manifest["curation"]["examples"] == result.manifests[0].record_count);
}

TEST_CASE("reruns are byte-identical, whatever the worker count") {
    TempDir dir;
    std::mt19937_64 rng(2);
    fs::create_directories(dir / "in");
    for (int s = 0; s < 3; ++s) write_shard(fixture(rng), dir / "in" / ("shard" + std::to_string(s) + ".jsonl"));
    auto cfg = write_config(dir, R"({"inputs": ["in/*.jsonl"], "output_dir": "out", "workers": 1})");
    REQUIRE(run_pipeline_file(cfg).exit_code == 0);
    fs::rename(dir / "out", dir / "out1");
    setenv("CORPUSFORGE_WORKERS", "3", 1);
    auto second = run_pipeline_file(cfg);
    unsetenv("CORPUSFORGE_WORKERS");
    REQUIRE(second.exit_code == 0);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(dir / "out1")) {
        const auto name = entry.path().filename();
        CAPTURE(name.string());
        CHECK(cftest::read_text(entry.path()) == cftest::read_text(dir / "out" / name));
        ++files;
    }
    CHECK(files >= 9);
}

TEST_CASE("missing rule file fails before any processing") {
    TempDir dir;
    std::mt19937_64 rng(3);
    write_shard(fixture(rng), dir / "s.jsonl");
    auto cfg = write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out",
                                     "stages": [{"name": "dedup", "stopwords": "nope.txt"}]})");
    try {
        load_pipeline_config(cfg);
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Config);
    }
    auto r = run_pipeline_file(cfg);
    CHECK(r.exit_code == kExitConfig);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("config validation") {
    TempDir dir;
    std::mt19937_64 rng(4);
    write_shard(fixture(rng), dir / "s.jsonl");
    const char* bad[] = {
        R"({"inputs": "s.jsonl", "output_dir": "out", "stages": ["frobnicate"]})",
        R"({"inputs": "s.jsonl", "output_dir": "out", "color": "blue"})",
        R"({"inputs": "none*.jsonl", "output_dir": "out"})",
        R"({"inputs": "s.jsonl", "output_dir": "."})",
        R"({"inputs": "s.jsonl", "output_dir": "out", "stages": [{"name": "dedup", "prefix_tokenz": 3}]})",
        R"({"inputs": "s.jsonl", "output_dir": "out", "stages": ["report", "report"]})",
        R"({"inputs": "s.jsonl", "output_dir": "out", "stages": [{"name": "decontam"}]})",
        R"({"inputs": "s.jsonl", "output_dir": "out", "workers": 0})",
        R"({"inputs": "s.jsonl"})",
        R"(not json)",
    };
    for (const char* body : bad) {
        CAPTURE(body);
        CHECK(run_pipeline_file(write_config(dir, body)).exit_code == kExitConfig);
    }
    auto ok = load_pipeline_config(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out",
        "stages": ["license_filter", {"name": "dedup", "prefix_tokens": 16}]})"));
    CHECK(ok.stages.size() == 2);
    CHECK(ok.inputs.size() == 1);
    CHECK(ok.config_hash.size() == 16);
    // The hash covers parameters but not the worker count.
    auto other = load_pipeline_config(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out",
        "stages": ["license_filter", {"name": "dedup", "prefix_tokens": 17}]})"));
    CHECK(other.config_hash != ok.config_hash);
    auto workers = load_pipeline_config(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out", "workers": 4,
        "stages": ["license_filter", {"name": "dedup", "prefix_tokens": 16}]})"));
    CHECK(workers.config_hash == ok.config_hash);
}

TEST_CASE("empty stage list copies shards and manifests") {
    TempDir dir;
    std::mt19937_64 rng(5);
    write_shard(fixture(rng), dir / "s.jsonl");
    auto r = run_pipeline_file(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out", "stages": []})"));
    REQUIRE(r.exit_code == kExitOk);
    CHECK(cftest::read_text(dir / "out" / "s.jsonl") == cftest::read_text(dir / "s.jsonl"));
    CHECK(cftest::read_text(dir / "out" / "s.jsonl.manifest") == cftest::read_text(dir / "s.jsonl.manifest"));
    CHECK(r.drops.empty());
}

TEST_CASE("malformed lines are logged, not fatal") {
    TempDir dir;
    std::mt19937_64 rng(6);
    write_shard(fixture(rng), dir / "s.jsonl");
    fs::remove(dir / "s.jsonl.manifest");
    auto text = cftest::read_text(dir / "s.jsonl");
    cftest::write_text(dir / "s.jsonl", text + "{broken\n");
    auto r = run_pipeline_file(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out"})"));
    REQUIRE(r.exit_code == kExitOk);
    bool found = false;
    for (const auto& d : r.drops) found |= (d.stage == "read" && d.doc_id == "s:22");
    CHECK(found);
}

TEST_CASE("decontam stage annotates and optionally drops") {
    TempDir dir;
    std::mt19937_64 rng(7);
    auto docs = fixture(rng);
    const std::string item = cftest::random_text(rng, 30, 1000, "bench");
    docs[1].text += " " + item;
    docs[2].text += " " + item;
    write_shard(docs, dir / "s.jsonl");
    BenchmarkSpec spec;
    spec.name = "toy";
    spec.test_items = {{"q1", item}};
    save_index(build_index_set(std::vector<BenchmarkSpec>{spec}, TextFingerprinter::defaults()), dir / "toy.mvix");

    auto r = run_pipeline_file(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out",
        "stages": ["license_filter", {"name": "decontam", "index": "toy.mvix"}]})"));
    REQUIRE(r.exit_code == kExitOk);
    auto rep = read_json(dir / "out" / "contamination_report.json");
    CHECK(rep["flagged_doc_ids"] == nlohmann::json::array({"s/a1", "s/a2"}));
    auto out = read_shard(dir / "out" / "s.jsonl").docs;
    CHECK(out.size() == 16);
    int annotated = 0;
    for (const auto& d : out) annotated += d.extra.contains("contamination");
    CHECK(annotated == 2);

    auto dropped = run_pipeline_file(write_config(dir, R"({"inputs": "s.jsonl", "output_dir": "out2",
        "stages": ["license_filter", {"name": "decontam", "index": "toy.mvix", "drop": true}]})"));
    REQUIRE(dropped.exit_code == kExitOk);
    CHECK(read_shard(dir / "out2" / "s.jsonl").docs.size() == 14);
}

TEST_CASE("I/O failure during a run maps to exit 4 and keeps finished shards") {
    TempDir dir;
    std::mt19937_64 rng(8);
    write_shard(fixture(rng), dir / "a.jsonl");
    write_shard(fixture(rng), dir / "b.jsonl");
    auto cfg = load_pipeline_config(write_config(dir, R"({"inputs": "*.jsonl", "output_dir": "out"})"));
    fs::remove(dir / "b.jsonl");
    auto r = run_pipeline(cfg);
    CHECK(r.exit_code == kExitIo);
    CHECK(fs::exists(dir / "out" / "a.jsonl"));
    CHECK(read_json(dir / "out" / "run_manifest.json")["status"] == "failed");
}

TEST_CASE("stage failure maps to exit 3") {
    TempDir dir;
    std::mt19937_64 rng(9);
    write_shard(fixture(rng), dir / "a.jsonl");
    // A stale manifest whose history does not chain is a stage-level error.
    auto m = read_manifest(dir / "a.jsonl.manifest");
    m.record_count += 1;
    write_manifest(m, dir / "a.jsonl.manifest");
    auto r = run_pipeline_file(write_config(dir, R"({"inputs": "a.jsonl", "output_dir": "out"})"));
    CHECK(r.exit_code == kExitStage);
}

TEST_CASE("worker override from the environment") {
    setenv("CORPUSFORGE_WORKERS", "3", 1);
    CHECK(effective_workers(1) == 3);
    setenv("CORPUSFORGE_WORKERS", "junk", 1);
    CHECK_THROWS_AS(effective_workers(2), Error);
    unsetenv("CORPUSFORGE_WORKERS");
    CHECK(effective_workers(5) == 5);
}

}  // TEST_SUITE
