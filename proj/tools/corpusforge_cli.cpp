// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

// Command-line front end. Talks to the library only through its C API.

#include <corpusforge/corpusforge.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

std::vector<const char*> c_strs(const std::vector<std::string>& v) {
    std::vector<const char*> out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(s.c_str());
    return out;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int report_status(cf_status st, const char* what) {
    if (st == CF_OK) return 0;
    std::fprintf(stderr, "corpusforge %s: %s: %s\n", what, cf_status_name(st), cf_last_error());
    return cf_exit_code(st);
}

struct IndexDeleter {
    void operator()(cf_index* p) const { cf_index_free(p); }
};
struct ScanDeleter {
    void operator()(cf_scan_result* p) const { cf_scan_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus curation and benchmark decontamination"};
    app.require_subcommand(1);
    app.set_version_flag("--version", cf_version());

    size_t workers = 0;
    app.add_option("-j,--workers", workers, "Worker threads (default 1)");

    // run
    std::string run_config;
    auto* run = app.add_subcommand("run", "Run a pipeline config");
    run->add_option("config", run_config, "Pipeline config file")->required();

    // validate-config
    std::string validate_config;
    auto* validate = app.add_subcommand("validate-config", "Check a pipeline config without running it");
    validate->add_option("config", validate_config, "Pipeline config file")->required();

    // build-index
    std::vector<std::string> bi_bench;
    std::string bi_out, bi_stopwords, bi_patterns;
    size_t bi_n = 13;
    auto* build = app.add_subcommand("build-index", "Build the n-gram index of benchmark test splits");
    build->add_option("--bench", bi_bench, "Benchmark spec file (repeatable)")->required();
    build->add_option("--out", bi_out, "Index output path")->required();
    build->add_option("--n", bi_n, "N-gram length");
    build->add_option("--stopwords", bi_stopwords, "Stopword list (default: shipped list)");
    build->add_option("--patterns", bi_patterns, "Exclusion patterns (default: shipped list)");

    // scan
    std::string sc_index, sc_report, sc_table, sc_leaked;
    std::vector<std::string> sc_corpus;
    size_t sc_min_hits = 3;
    double sc_min_coverage = 0.001;
    auto* scan = app.add_subcommand("scan", "Scan corpus shards for benchmark contamination");
    scan->add_option("--index", sc_index, "Index file")->required();
    scan->add_option("--corpus", sc_corpus, "Corpus shards")->required();
    scan->add_option("--min-hits", sc_min_hits, "Minimum distinct matching n-grams");
    scan->add_option("--min-coverage", sc_min_coverage, "Minimum fraction of the document's n-grams");
    scan->add_option("--report", sc_report, "JSON report path")->required();
    scan->add_option("--table", sc_table, "Text table path");
    scan->add_option("--leaked", sc_leaked, "Leaked-hash output path");

    // decontam-bench
    std::string db_bench, db_index, db_leaked, db_out;
    auto* dbench = app.add_subcommand("decontam-bench", "Remove leaked items from a benchmark");
    dbench->add_option("--bench", db_bench, "Benchmark spec file")->required();
    dbench->add_option("--index", db_index, "Index file")->required();
    dbench->add_option("--leaked", db_leaked, "Leaked-hash file from scan")->required();
    dbench->add_option("--out", db_out, "Cleaned spec output path")->required();

    // synth-math
    std::string sm_config, sm_out;
    auto* synth = app.add_subcommand("synth-math", "Generate verified synthetic math problems");
    synth->add_option("--config", sm_config, "Generator config file")->required();
    synth->add_option("--out", sm_out, "Output shard")->required();

    // report
    std::vector<std::string> rp_corpus, rp_compare;
    std::string rp_out, rp_json, rp_taxonomy, rp_repeats;
    auto* report = app.add_subcommand("report", "Summarize a corpus mixture");
    report->add_option("--corpus", rp_corpus, "Corpus shards")->required();
    report->add_option("--out", rp_out, "Text report path")->required();
    report->add_option("--json", rp_json, "JSON summary path");
    report->add_option("--taxonomy", rp_taxonomy, "Row taxonomy file");
    report->add_option("--repeats", rp_repeats, "Per-source repeat factors file");
    report->add_option("--compare", rp_compare, "Second shard set to compare against");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (*run) {
        const int rc = cf_pipeline_run(run_config.c_str());
        if (rc != 0) std::fprintf(stderr, "corpusforge run: %s\n", cf_last_error());
        return rc;
    }
    if (*validate) {
        char hash[64] = {0};
        const cf_status st = cf_pipeline_validate(validate_config.c_str(), hash, sizeof hash);
        if (st == CF_OK) std::printf("ok %s\n", hash);
        return report_status(st, "validate-config");
    }
    if (*build) {
        cf_index* raw = nullptr;
        auto paths = c_strs(bi_bench);
        cf_status st = cf_index_build(paths.data(), paths.size(), bi_n, opt(bi_stopwords), opt(bi_patterns), &raw);
        if (st != CF_OK) return report_status(st, "build-index");
        std::unique_ptr<cf_index, IndexDeleter> index(raw);
        st = cf_index_save(index.get(), bi_out.c_str());
        if (st != CF_OK) return report_status(st, "build-index");
        for (size_t i = 0; i < cf_index_benchmark_count(index.get()); ++i)
            std::printf("%s\t%llu unique n-grams\n", cf_index_benchmark_name(index.get(), i),
                        static_cast<unsigned long long>(cf_index_total_unique(index.get(), i)));
        return 0;
    }
    if (*scan) {
        cf_index* raw = nullptr;
        cf_status st = cf_index_load(sc_index.c_str(), &raw);
        if (st != CF_OK) return report_status(st, "scan");
        std::unique_ptr<cf_index, IndexDeleter> index(raw);
        auto paths = c_strs(sc_corpus);
        cf_scan_result* raw_res = nullptr;
        st = cf_scan(index.get(), paths.data(), paths.size(), sc_min_hits, sc_min_coverage, workers, &raw_res);
        if (st != CF_OK) return report_status(st, "scan");
        std::unique_ptr<cf_scan_result, ScanDeleter> res(raw_res);
        st = cf_scan_write_report(res.get(), sc_report.c_str(), opt(sc_table));
        if (st == CF_OK && !sc_leaked.empty()) st = cf_scan_write_leaked(res.get(), sc_leaked.c_str());
        if (st != CF_OK) return report_status(st, "scan");
        std::fputs(cf_scan_report_table(res.get()), stdout);
        return 0;
    }
    if (*dbench) {
        cf_index* raw = nullptr;
        cf_status st = cf_index_load(db_index.c_str(), &raw);
        if (st != CF_OK) return report_status(st, "decontam-bench");
        std::unique_ptr<cf_index, IndexDeleter> index(raw);
        size_t kept = 0, removed = 0;
        st = cf_decontaminate_benchmark(index.get(), db_bench.c_str(), db_leaked.c_str(), db_out.c_str(),
                                        &kept, &removed);
        if (st != CF_OK) return report_status(st, "decontam-bench");
        std::printf("kept %zu, removed %zu\n", kept, removed);
        return 0;
    }
    if (*synth) {
        uint64_t n = 0;
        const cf_status st = cf_synth_math(sm_config.c_str(), sm_out.c_str(), workers, &n);
        if (st != CF_OK) return report_status(st, "synth-math");
        std::printf("wrote %llu verified records\n", static_cast<unsigned long long>(n));
        return 0;
    }
    if (*report) {
        auto paths = c_strs(rp_corpus);
        cf_status st;
        if (!rp_compare.empty()) {
            auto other = c_strs(rp_compare);
            st = cf_report_compare(paths.data(), paths.size(), other.data(), other.size(), opt(rp_taxonomy),
                                   "corpus", "compare", rp_out.c_str());
        } else {
            st = cf_report(paths.data(), paths.size(), opt(rp_taxonomy), opt(rp_repeats), rp_out.c_str(),
                           opt(rp_json), workers);
        }
        return report_status(st, "report");
    }
    return 2;
}
