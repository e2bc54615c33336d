// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "corpusforge/corpusforge.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "decontam.hpp"
#include "error.hpp"
#include "hash.hpp"
#include "mixture_report.hpp"
#include "normalize.hpp"
#include "pipeline.hpp"
#include "synth_math.hpp"
#include "util.hpp"

using namespace corpusforge;
using nlohmann::json;

struct cf_index {
    IndexSet set;
};

struct cf_scan_result {
    LeakageReport report;
    std::vector<std::string> flagged;
    std::map<std::string, std::vector<Hash64>> leaked;
    std::string table;
};

namespace {

thread_local std::string g_last_error;

cf_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return CF_ERR_IO;
        case ErrorCode::MalformedRecord: return CF_ERR_MALFORMED_RECORD;
        case ErrorCode::DuplicateId: return CF_ERR_DUPLICATE_ID;
        case ErrorCode::InvalidN: return CF_ERR_INVALID_N;
        case ErrorCode::InvalidPattern: return CF_ERR_INVALID_PATTERN;
        case ErrorCode::InvalidUrl: return CF_ERR_INVALID_URL;
        case ErrorCode::InvalidTarget: return CF_ERR_INVALID_TARGET;
        case ErrorCode::EmptyBenchmark: return CF_ERR_EMPTY_BENCHMARK;
        case ErrorCode::PartitionOverlap: return CF_ERR_PARTITION_OVERLAP;
        case ErrorCode::Format: return CF_ERR_FORMAT;
        case ErrorCode::Config: return CF_ERR_CONFIG;
        case ErrorCode::ConfigMismatch: return CF_ERR_CONFIG_MISMATCH;
        case ErrorCode::Stage: return CF_ERR_STAGE;
        case ErrorCode::ScopeViolation: return CF_ERR_SCOPE_VIOLATION;
        case ErrorCode::TaxonomyMismatch: return CF_ERR_TAXONOMY_MISMATCH;
        case ErrorCode::UnsatisfiableTemplate: return CF_ERR_UNSATISFIABLE_TEMPLATE;
        case ErrorCode::InvalidArgument: return CF_ERR_INVALID_ARGUMENT;
    }
    return CF_ERR_INTERNAL;
}

cf_status fail(cf_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs fn, translating exceptions into a status and the thread's message.
template <class Fn>
cf_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        return fn();
    } catch (const Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const json::exception& e) {
        return fail(CF_ERR_FORMAT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(CF_ERR_INTERNAL, "unknown failure");
    }
}

std::vector<std::filesystem::path> to_paths(const char* const* paths, size_t count) {
    std::vector<std::filesystem::path> out;
    if (paths == nullptr && count > 0) throw Error(ErrorCode::InvalidArgument, "null path list");
    for (size_t i = 0; i < count; ++i) {
        if (paths[i] == nullptr) throw Error(ErrorCode::InvalidArgument, "null path");
        out.emplace_back(paths[i]);
    }
    return out;
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Config, path.string() + ": " + e.what());
    }
}

}  // namespace

extern "C" {

const char* cf_last_error(void) { return g_last_error.c_str(); }

const char* cf_status_name(cf_status status) {
    switch (status) {
        case CF_OK: return "Ok";
        case CF_ERR_VERIFICATION: return "Verification";
        case CF_ERR_INTERNAL: return "Internal";
        default: break;
    }
    if (status >= CF_ERR_IO && status <= CF_ERR_INVALID_ARGUMENT)
        return error_code_name(static_cast<ErrorCode>(status - CF_ERR_IO));
    return "Unknown";
}

const char* cf_version(void) { return "0.1.0"; }

int cf_exit_code(cf_status status) {
    switch (status) {
        case CF_OK: return kExitOk;
        case CF_ERR_CONFIG:
        case CF_ERR_CONFIG_MISMATCH:
        case CF_ERR_INVALID_ARGUMENT:
            return kExitConfig;
        case CF_ERR_IO: return kExitIo;
        default: return kExitStage;
    }
}

cf_status cf_index_build(const char* const* bench_paths, size_t bench_count, size_t n,
                         const char* stopwords_path, const char* patterns_path, cf_index** out) {
    return guarded([&] {
        if (out == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null output handle");
        *out = nullptr;
        if (bench_count == 0) return fail(CF_ERR_INVALID_ARGUMENT, "no benchmark files");
        std::vector<BenchmarkSpec> benches;
        for (const auto& p : to_paths(bench_paths, bench_count)) {
            auto loaded = load_benchmarks(p);
            benches.insert(benches.end(), loaded.begin(), loaded.end());
        }
        StopwordSet stopwords = stopwords_path ? load_stopwords(read_file(stopwords_path))
                                               : default_stopwords();
        PatternSet patterns = patterns_path ? PatternSet::from_file_contents(read_file(patterns_path))
                                            : PatternSet::defaults();
        TextFingerprinter fp(std::move(stopwords), std::move(patterns), n);
        auto handle = std::make_unique<cf_index>();
        handle->set = build_index_set(benches, fp);
        *out = handle.release();
        return CF_OK;
    });
}

cf_status cf_index_load(const char* path, cf_index** out) {
    return guarded([&] {
        if (out == nullptr || path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        auto handle = std::make_unique<cf_index>();
        handle->set = load_index(path);
        *out = handle.release();
        return CF_OK;
    });
}

cf_status cf_index_save(const cf_index* index, const char* path) {
    return guarded([&] {
        if (index == nullptr || path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        save_index(index->set, path);
        return CF_OK;
    });
}

size_t cf_index_benchmark_count(const cf_index* index) {
    return index ? index->set.benchmarks.size() : 0;
}

const char* cf_index_benchmark_name(const cf_index* index, size_t i) {
    if (index == nullptr || i >= index->set.benchmarks.size()) return nullptr;
    return index->set.benchmarks[i].name.c_str();
}

uint64_t cf_index_total_unique(const cf_index* index, size_t i) {
    if (index == nullptr || i >= index->set.benchmarks.size()) return 0;
    return index->set.benchmarks[i].total_unique();
}

void cf_index_free(cf_index* index) { delete index; }

cf_status cf_scan(const cf_index* index, const char* const* shard_paths, size_t shard_count,
                  size_t min_hits, double min_coverage, size_t workers, cf_scan_result** out) {
    return guarded([&] {
        if (index == nullptr || out == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        if (!(min_coverage >= 0.0 && min_coverage <= 1.0))
            return fail(CF_ERR_INVALID_ARGUMENT, "min_coverage must lie in [0, 1]");
        const auto& benches = index->set.benchmarks;
        const TextFingerprinter fp = index->set.fingerprinter();
        const ContaminationThresholds t{min_hits, min_coverage};
        LeakageAccumulator total(benches);
        for (const auto& path : to_paths(shard_paths, shard_count)) {
            ShardContents contents = read_shard(path);
            if (!contents.errors.empty()) {
                const auto& e = contents.errors.front();
                throw Error(e.code, path.string() + ":" + std::to_string(e.line_no) + ": " + e.message);
            }
            const std::string shard = shard_id_for(path);
            std::vector<Document> live;
            live.reserve(contents.docs.size());
            for (auto& d : contents.docs) {
                if (d.drop_reason) continue;
                d.id = shard + "/" + d.id;
                live.push_back(std::move(d));
            }
            total.merge(scan_documents(live, benches, fp, t, effective_workers(workers)));
        }
        auto result = std::make_unique<cf_scan_result>();
        result->report = total.report();
        result->flagged = total.flagged_doc_ids();
        auto leaked = total.leaked_hashes();
        for (size_t i = 0; i < benches.size(); ++i) result->leaked[benches[i].name] = std::move(leaked[i]);
        result->table = render_report_table(result->report);
        *out = result.release();
        return CF_OK;
    });
}

uint64_t cf_scan_total_docs(const cf_scan_result* r) { return r ? r->report.total_docs_scanned : 0; }

uint64_t cf_scan_overall_contaminated(const cf_scan_result* r) {
    return r ? r->report.overall_contaminated_docs : 0;
}

size_t cf_scan_benchmark_count(const cf_scan_result* r) { return r ? r->report.benchmarks.size() : 0; }

const char* cf_scan_benchmark_name(const cf_scan_result* r, size_t i) {
    if (r == nullptr || i >= r->report.benchmarks.size()) return nullptr;
    return r->report.benchmarks[i].benchmark.c_str();
}

uint64_t cf_scan_contaminated_docs(const cf_scan_result* r, size_t i) {
    if (r == nullptr || i >= r->report.benchmarks.size()) return 0;
    return r->report.benchmarks[i].contaminated_docs;
}

uint64_t cf_scan_unique_leaked(const cf_scan_result* r, size_t i) {
    if (r == nullptr || i >= r->report.benchmarks.size()) return 0;
    return r->report.benchmarks[i].unique_ngrams_leaked;
}

double cf_scan_leak_percentage(const cf_scan_result* r, size_t i) {
    if (r == nullptr || i >= r->report.benchmarks.size()) return 0.0;
    return r->report.benchmarks[i].leak_percentage;
}

size_t cf_scan_flagged_count(const cf_scan_result* r) { return r ? r->flagged.size() : 0; }

const char* cf_scan_flagged_id(const cf_scan_result* r, size_t i) {
    if (r == nullptr || i >= r->flagged.size()) return nullptr;
    return r->flagged[i].c_str();
}

cf_status cf_scan_write_report(const cf_scan_result* r, const char* json_path, const char* text_path) {
    return guarded([&] {
        if (r == nullptr || json_path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        auto j = report_to_json(r->report);
        j["flagged_doc_ids"] = r->flagged;
        write_file(json_path, j.dump(2) + "\n");
        if (text_path) write_file(text_path, r->table);
        return CF_OK;
    });
}

const char* cf_scan_report_table(const cf_scan_result* r) { return r ? r->table.c_str() : ""; }

cf_status cf_scan_write_leaked(const cf_scan_result* r, const char* path) {
    return guarded([&] {
        if (r == nullptr || path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        save_leaked(r->leaked, path);
        return CF_OK;
    });
}

void cf_scan_free(cf_scan_result* r) { delete r; }

cf_status cf_decontaminate_benchmark(const cf_index* index, const char* bench_path,
                                     const char* leaked_path, const char* out_path, size_t* kept,
                                     size_t* removed) {
    return guarded([&] {
        if (index == nullptr || bench_path == nullptr || leaked_path == nullptr || out_path == nullptr)
            return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        const auto benches = load_benchmarks(bench_path);
        const auto leaked = load_leaked(leaked_path);
        nlohmann::ordered_json cleaned = nlohmann::ordered_json::array();
        std::string removed_lines;
        size_t n_kept = 0, n_removed = 0;
        for (const auto& bench : benches) {
            const BenchmarkIndex* idx = nullptr;
            for (const auto& b : index->set.benchmarks)
                if (b.name == bench.name) idx = &b;
            if (idx == nullptr)
                return fail(CF_ERR_INVALID_ARGUMENT, "benchmark '" + bench.name + "' is not in the index");
            std::vector<Hash64> hashes;
            if (auto it = leaked.find(bench.name); it != leaked.end()) hashes = it->second;
            DecontamResult res = decontaminate_benchmark(bench, *idx, hashes);
            for (const auto& id : res.removed_ids) removed_lines += id + "\n";
            n_kept += res.bench.test_items.size();
            n_removed += res.removed_ids.size();
            cleaned.push_back(benchmark_to_json(res.bench));
        }
        const nlohmann::ordered_json doc = cleaned.size() == 1 ? cleaned[0] : cleaned;
        write_file(out_path, doc.dump(2) + "\n");
        write_file(std::string(out_path) + ".removed", removed_lines);
        if (kept) *kept = n_kept;
        if (removed) *removed = n_removed;
        return CF_OK;
    });
}

cf_status cf_synth_math(const char* config_path, const char* out_shard, size_t workers,
                        uint64_t* records_written) {
    return guarded([&] {
        if (config_path == nullptr || out_shard == nullptr)
            return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        const GeneratorConfig cfg = parse_generator_config(parse_json_file(config_path));
        const auto records = generate_corpus(cfg, effective_workers(workers));
        std::vector<Document> docs;
        docs.reserve(records.size());
        for (size_t i = 0; i < records.size(); ++i) {
            const VerifyResult v = verify_record(records[i]);
            if (!v.ok())
                return fail(CF_ERR_VERIFICATION, "record " + std::to_string(i) + " (" +
                                                     records[i].template_id + "): " + to_string(v.status) +
                                                     ": " + v.message);
            docs.push_back(record_to_document(records[i], i));
        }
        json extra = {{"synth_math", {{"seed", cfg.seed}, {"records", records.size()}}}};
        write_shard(docs, out_shard, {}, std::move(extra));
        if (records_written) *records_written = records.size();
        return CF_OK;
    });
}

namespace {

MixtureTaxonomy load_taxonomy(const char* path) {
    if (path == nullptr) return MixtureTaxonomy::by_category();
    try {
        return MixtureTaxonomy::from_json(parse_json_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        throw Error(ErrorCode::Config, std::string(path) + ": " + e.what());
    }
}

RepeatPolicy load_repeats(const char* path) {
    if (path == nullptr) return {};
    try {
        return RepeatPolicy::from_json(parse_json_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        throw Error(ErrorCode::Config, std::string(path) + ": " + e.what());
    }
}

}  // namespace

cf_status cf_report(const char* const* shard_paths, size_t shard_count, const char* taxonomy_path,
                    const char* repeats_path, const char* out_path, const char* json_path,
                    size_t workers) {
    return guarded([&] {
        if (out_path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null output path");
        const auto summary = summarize_shards(to_paths(shard_paths, shard_count), load_taxonomy(taxonomy_path),
                                              load_repeats(repeats_path), effective_workers(workers));
        write_file(out_path, render_summary(summary));
        if (json_path) write_file(json_path, summary_to_json(summary).dump(2) + "\n");
        return CF_OK;
    });
}

cf_status cf_report_compare(const char* const* a_paths, size_t a_count, const char* const* b_paths,
                            size_t b_count, const char* taxonomy_path, const char* name_a,
                            const char* name_b, const char* out_path) {
    return guarded([&] {
        if (out_path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null output path");
        const auto taxonomy = load_taxonomy(taxonomy_path);
        const auto a = summarize_shards(to_paths(a_paths, a_count), taxonomy);
        const auto b = summarize_shards(to_paths(b_paths, b_count), taxonomy);
        const auto rows = compare(a, b);
        write_file(out_path, render_comparison(rows, name_a ? name_a : "A", name_b ? name_b : "B"));
        return CF_OK;
    });
}

cf_status cf_pipeline_validate(const char* config_path, char* hash_out, size_t hash_len) {
    return guarded([&] {
        if (config_path == nullptr) return fail(CF_ERR_INVALID_ARGUMENT, "null argument");
        const PipelineConfig cfg = load_pipeline_config(config_path);
        if (hash_out && hash_len > 0) {
            const size_t n = std::min(hash_len - 1, cfg.config_hash.size());
            std::memcpy(hash_out, cfg.config_hash.data(), n);
            hash_out[n] = '\0';
        }
        return CF_OK;
    });
}

int cf_pipeline_run(const char* config_path) {
    g_last_error.clear();
    if (config_path == nullptr) {
        g_last_error = "null argument";
        return kExitConfig;
    }
    try {
        PipelineResult r = run_pipeline_file(config_path);
        if (r.exit_code != kExitOk) g_last_error = r.message;
        return r.exit_code;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return kExitStage;
    }
}

}  // extern "C"
