// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

// Exercises the shared library through its C header only, and the CLI
// through its exit codes.

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpusforge/corpusforge.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        std::string tmpl = (fs::temp_directory_path() / "cf-capi-XXXXXX").string();
        dir = mkdtemp(tmpl.data());
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string words(const std::string& prefix, int from, int count) {
    std::string out;
    for (int i = from; i < from + count; ++i) out += (out.empty() ? "" : " ") + prefix + std::to_string(i);
    return out;
}

std::string doc_line(const std::string& id, const std::string& text) {
    return json{{"id", id},
                {"text", text},
                {"source", "web"},
                {"license_tier", "Tier1"},
                {"category", "Web"},
                {"synthetic_status", "NonSynthetic"}}
               .dump() +
           "\n";
}

// 10 test items of 20 distinct tokens each; docs d0..d3 quote items 0..3.
void make_fixture(const Scratch& s) {
    json test = json::array();
    for (int i = 0; i < 10; ++i) test.push_back({{"item_id", "q" + std::to_string(i)}, {"text", words("item" + std::to_string(i) + "tok", 0, 20)}});
    write(s / "bench.json", json{{"name", "toy"}, {"test", test}}.dump());
    std::string shard;
    for (int i = 0; i < 20; ++i) {
        std::string text = words("filler" + std::to_string(i) + "x", 0, 200);
        if (i < 4) text += " " + words("item" + std::to_string(i) + "tok", 0, 20);
        shard += doc_line("d" + std::to_string(i), text);
    }
    write(s / "shard.jsonl", shard);
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names, version and exit codes") {
    CHECK(std::string(cf_version()) == "0.1.0");
    CHECK(std::string(cf_status_name(CF_OK)) == "Ok");
    CHECK(std::string(cf_status_name(CF_ERR_CONFIG_MISMATCH)) == "ConfigMismatch");
    CHECK(cf_exit_code(CF_OK) == 0);
    CHECK(cf_exit_code(CF_ERR_CONFIG) == 2);
    CHECK(cf_exit_code(CF_ERR_INVALID_ARGUMENT) == 2);
    CHECK(cf_exit_code(CF_ERR_IO) == 4);
    CHECK(cf_exit_code(CF_ERR_MALFORMED_RECORD) == 3);
}

TEST_CASE("null and invalid arguments") {
    cf_index* index = nullptr;
    CHECK(cf_index_build(nullptr, 1, 13, nullptr, nullptr, &index) == CF_ERR_INVALID_ARGUMENT);
    CHECK(index == nullptr);
    CHECK(std::string(cf_last_error()).size() > 0);
    CHECK(cf_index_load("/nonexistent/x.mvix", &index) == CF_ERR_IO);
    CHECK(cf_scan(nullptr, nullptr, 0, 3, 0.001, 1, nullptr) == CF_ERR_INVALID_ARGUMENT);
    CHECK(cf_index_benchmark_name(nullptr, 0) == nullptr);
    cf_index_free(nullptr);
    cf_scan_free(nullptr);
}

TEST_CASE("build, save, load, scan and decontaminate") {
    Scratch s;
    make_fixture(s);
    std::string bench = s / "bench.json";
    const char* benches[] = {bench.c_str()};
    cf_index* index = nullptr;
    REQUIRE(cf_index_build(benches, 1, 13, nullptr, nullptr, &index) == CF_OK);
    CHECK(cf_index_benchmark_count(index) == 1);
    CHECK(std::string(cf_index_benchmark_name(index, 0)) == "toy");
    CHECK(cf_index_total_unique(index, 0) == 80);  // 10 items x (20 - 13 + 1)
    CHECK(cf_index_save(index, (s / "toy.mvix").c_str()) == CF_OK);
    cf_index_free(index);

    index = nullptr;
    REQUIRE(cf_index_load((s / "toy.mvix").c_str(), &index) == CF_OK);
    std::string shard = s / "shard.jsonl";
    const char* shards[] = {shard.c_str()};
    cf_scan_result* result = nullptr;
    REQUIRE(cf_scan(index, shards, 1, 3, 0.001, 2, &result) == CF_OK);
    CHECK(cf_scan_total_docs(result) == 20);
    CHECK(cf_scan_overall_contaminated(result) == 4);
    CHECK(cf_scan_contaminated_docs(result, 0) == 4);
    CHECK(cf_scan_unique_leaked(result, 0) == 32);
    CHECK(cf_scan_leak_percentage(result, 0) == doctest::Approx(40.0));
    REQUIRE(cf_scan_flagged_count(result) == 4);
    CHECK(std::string(cf_scan_flagged_id(result, 0)) == "shard/d0");
    CHECK(std::string(cf_scan_flagged_id(result, 3)) == "shard/d3");
    CHECK(cf_scan_flagged_id(result, 4) == nullptr);
    CHECK(std::string(cf_scan_report_table(result)).find("toy") != std::string::npos);
    REQUIRE(cf_scan_write_report(result, (s / "report.json").c_str(), (s / "report.txt").c_str()) == CF_OK);
    auto rep = json::parse(slurp(s / "report.json"));
    CHECK(rep["flagged_doc_ids"].size() == 4);
    REQUIRE(cf_scan_write_leaked(result, (s / "leaked.json").c_str()) == CF_OK);
    cf_scan_free(result);

    size_t kept = 0, removed = 0;
    REQUIRE(cf_decontaminate_benchmark(index, bench.c_str(), (s / "leaked.json").c_str(), (s / "clean.json").c_str(),
                                       &kept, &removed) == CF_OK);
    CHECK(kept == 6);
    CHECK(removed == 4);
    CHECK(slurp(s / "clean.json.removed") == "q0\nq1\nq2\nq3\n");
    cf_index_free(index);

    // The cleaned benchmark no longer matches anything.
    std::string clean = s / "clean.json";
    const char* cleaned[] = {clean.c_str()};
    REQUIRE(cf_index_build(cleaned, 1, 13, nullptr, nullptr, &index) == CF_OK);
    REQUIRE(cf_scan(index, shards, 1, 3, 0.001, 1, &result) == CF_OK);
    CHECK(cf_scan_overall_contaminated(result) == 0);
    cf_scan_free(result);
    cf_index_free(index);
}

TEST_CASE("malformed shard is an error") {
    Scratch s;
    make_fixture(s);
    write(s / "bad.jsonl", doc_line("a", "x y z") + "{oops\n");
    std::string bench = s / "bench.json", bad = s / "bad.jsonl";
    const char* benches[] = {bench.c_str()};
    const char* shards[] = {bad.c_str()};
    cf_index* index = nullptr;
    REQUIRE(cf_index_build(benches, 1, 13, nullptr, nullptr, &index) == CF_OK);
    cf_scan_result* result = nullptr;
    CHECK(cf_scan(index, shards, 1, 3, 0.001, 1, &result) == CF_ERR_MALFORMED_RECORD);
    CHECK(result == nullptr);
    cf_index_free(index);
}

TEST_CASE("synthetic math and mixture report") {
    Scratch s;
    write(s / "gen.json", R"({"seed": 11, "counts": {"arithmetic": 5, "fraction": 5, "linear_equation": 5, "word_problem": 5}})");
    uint64_t written = 0;
    REQUIRE(cf_synth_math((s / "gen.json").c_str(), (s / "math.jsonl").c_str(), 2, &written) == CF_OK);
    CHECK(written == 20);
    auto first = slurp(s / "math.jsonl");
    REQUIRE(cf_synth_math((s / "gen.json").c_str(), (s / "math2.jsonl").c_str(), 1, &written) == CF_OK);
    CHECK(slurp(s / "math2.jsonl") == first);

    std::string shard = s / "math.jsonl";
    const char* shards[] = {shard.c_str()};
    REQUIRE(cf_report(shards, 1, nullptr, nullptr, (s / "mix.txt").c_str(), (s / "mix.json").c_str(), 1) == CF_OK);
    CHECK(slurp(s / "mix.txt").find("100.0%") != std::string::npos);

    write(s / "bad.json", R"({"seed": 1, "colour": 3})");
    CHECK(cf_synth_math((s / "bad.json").c_str(), (s / "x.jsonl").c_str(), 1, &written) == CF_ERR_CONFIG);
}

TEST_CASE("pipeline validation through the C API") {
    Scratch s;
    make_fixture(s);
    write(s / "p.json", R"({"inputs": "shard.jsonl", "output_dir": "out", "stages": ["license_filter"]})");
    char hash[32] = {0};
    REQUIRE(cf_pipeline_validate((s / "p.json").c_str(), hash, sizeof hash) == CF_OK);
    CHECK(std::string(hash).size() == 16);
    CHECK(cf_pipeline_run((s / "p.json").c_str()) == 0);
    CHECK(fs::exists(s / "out/run_manifest.json"));
    write(s / "q.json", R"({"inputs": "shard.jsonl"})");
    CHECK(cf_pipeline_validate((s / "q.json").c_str(), hash, sizeof hash) == CF_ERR_CONFIG);
    CHECK(cf_pipeline_run((s / "q.json").c_str()) == 2);
}

TEST_CASE("CLI exit codes") {
    Scratch s;
    make_fixture(s);
    CHECK(run_cli("--version") == 0);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("validate-config " + (s / "missing.json")) == 2);
    CHECK(run_cli("build-index --bench " + (s / "bench.json") + " --out " + (s / "i.mvix")) == 0);
    CHECK(run_cli("scan --index " + (s / "i.mvix") + " --corpus " + (s / "shard.jsonl") + " --report " +
                  (s / "r.json")) == 0);
    CHECK(run_cli("scan --index " + (s / "nope.mvix") + " --corpus " + (s / "shard.jsonl") + " --report " +
                  (s / "r.json")) == 4);
    write(s / "bad.jsonl", "{oops\n");
    CHECK(run_cli("scan --index " + (s / "i.mvix") + " --corpus " + (s / "bad.jsonl") + " --report " +
                  (s / "r.json")) == 3);
    write(s / "p.json", R"({"inputs": "shard.jsonl", "output_dir": "out"})");
    CHECK(run_cli("run " + (s / "p.json")) == 0);
}

}  // TEST_SUITE
