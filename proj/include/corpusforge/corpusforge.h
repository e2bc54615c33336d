/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright (c) 2026 The corpusforge Authors */

/*
 * C interface to the corpusforge library. Objects are opaque handles that
 * the caller frees with the matching *_free function. Every fallible call
 * returns a cf_status; on failure cf_last_error() describes the problem
 * until the next call on the same thread.
 */

#ifndef CORPUSFORGE_H
#define CORPUSFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_ERR_IO = 1,
    CF_ERR_MALFORMED_RECORD = 2,
    CF_ERR_DUPLICATE_ID = 3,
    CF_ERR_INVALID_N = 4,
    CF_ERR_INVALID_PATTERN = 5,
    CF_ERR_INVALID_URL = 6,
    CF_ERR_INVALID_TARGET = 7,
    CF_ERR_EMPTY_BENCHMARK = 8,
    CF_ERR_PARTITION_OVERLAP = 9,
    CF_ERR_FORMAT = 10,
    CF_ERR_CONFIG = 11,
    CF_ERR_CONFIG_MISMATCH = 12,
    CF_ERR_STAGE = 13,
    CF_ERR_SCOPE_VIOLATION = 14,
    CF_ERR_TAXONOMY_MISMATCH = 15,
    CF_ERR_UNSATISFIABLE_TEMPLATE = 16,
    CF_ERR_INVALID_ARGUMENT = 17,
    CF_ERR_VERIFICATION = 18,
    CF_ERR_INTERNAL = 99
} cf_status;

/* Message for the last failed call on this thread ("" if none). */
CF_API const char* cf_last_error(void);
CF_API const char* cf_status_name(cf_status status);
CF_API const char* cf_version(void);

/* Process exit code for a status: 0 ok, 2 configuration, 4 I/O, 3 other. */
CF_API int cf_exit_code(cf_status status);

/* ---- benchmark n-gram indexes ---------------------------------------- */

typedef struct cf_index cf_index;

/*
 * Builds one index per benchmark found in the given spec files. n is the
 * n-gram length (13 in the reference protocol). stopwords_path and
 * patterns_path may be NULL for the shipped defaults.
 */
CF_API cf_status cf_index_build(const char* const* bench_paths, size_t bench_count, size_t n,
                                const char* stopwords_path, const char* patterns_path,
                                cf_index** out);
CF_API cf_status cf_index_load(const char* path, cf_index** out);
CF_API cf_status cf_index_save(const cf_index* index, const char* path);
CF_API size_t cf_index_benchmark_count(const cf_index* index);
/* NULL when i is out of range. */
CF_API const char* cf_index_benchmark_name(const cf_index* index, size_t i);
CF_API uint64_t cf_index_total_unique(const cf_index* index, size_t i);
CF_API void cf_index_free(cf_index* index);

/* ---- corpus scans ------------------------------------------------------ */

typedef struct cf_scan_result cf_scan_result;

/*
 * Scans every document of the shards against all benchmarks. Documents
 * are identified as "<shard id>/<doc id>". workers 0 means 1.
 *
 * Every call taking a worker count lets CORPUSFORGE_WORKERS override it.
 */
CF_API cf_status cf_scan(const cf_index* index, const char* const* shard_paths, size_t shard_count,
                         size_t min_hits, double min_coverage, size_t workers, cf_scan_result** out);
CF_API uint64_t cf_scan_total_docs(const cf_scan_result* result);
CF_API uint64_t cf_scan_overall_contaminated(const cf_scan_result* result);
CF_API size_t cf_scan_benchmark_count(const cf_scan_result* result);
CF_API const char* cf_scan_benchmark_name(const cf_scan_result* result, size_t i);
CF_API uint64_t cf_scan_contaminated_docs(const cf_scan_result* result, size_t i);
CF_API uint64_t cf_scan_unique_leaked(const cf_scan_result* result, size_t i);
CF_API double cf_scan_leak_percentage(const cf_scan_result* result, size_t i);
/* Ids flagged for at least one benchmark, sorted. */
CF_API size_t cf_scan_flagged_count(const cf_scan_result* result);
CF_API const char* cf_scan_flagged_id(const cf_scan_result* result, size_t i);
/* JSON report; text_path (may be NULL) receives the aligned table. */
CF_API cf_status cf_scan_write_report(const cf_scan_result* result, const char* json_path,
                                      const char* text_path);
/* Aligned table; the string lives as long as the result. */
CF_API const char* cf_scan_report_table(const cf_scan_result* result);
CF_API cf_status cf_scan_write_leaked(const cf_scan_result* result, const char* path);
CF_API void cf_scan_free(cf_scan_result* result);

/*
 * Removes test items that share an n-gram with the leaked set. Writes the
 * cleaned spec to out_path and the removed item ids, one per line, to
 * out_path + ".removed". kept/removed may be NULL.
 */
CF_API cf_status cf_decontaminate_benchmark(const cf_index* index, const char* bench_path,
                                            const char* leaked_path, const char* out_path,
                                            size_t* kept, size_t* removed);

/* ---- synthetic math ---------------------------------------------------- */

/*
 * Generates the records described by the JSON config, verifies every one
 * and writes them as a shard. Fails with CF_ERR_VERIFICATION, writing
 * nothing, if any record does not verify.
 */
CF_API cf_status cf_synth_math(const char* config_path, const char* out_shard, size_t workers,
                               uint64_t* records_written);

/* ---- mixture reports --------------------------------------------------- */

/*
 * Summarizes the shards and writes an aligned table to out_path and, if
 * json_path is not NULL, the structured summary. taxonomy_path and
 * repeats_path may be NULL.
 */
CF_API cf_status cf_report(const char* const* shard_paths, size_t shard_count, const char* taxonomy_path,
                           const char* repeats_path, const char* out_path, const char* json_path,
                           size_t workers);

/* Side-by-side comparison of two shard sets under one taxonomy. */
CF_API cf_status cf_report_compare(const char* const* a_paths, size_t a_count, const char* const* b_paths,
                                   size_t b_count, const char* taxonomy_path, const char* name_a,
                                   const char* name_b, const char* out_path);

/* ---- pipelines --------------------------------------------------------- */

/* Checks a pipeline config; on success hash_out (if not NULL) receives the
 * configuration hash, truncated to hash_len - 1 characters. */
CF_API cf_status cf_pipeline_validate(const char* config_path, char* hash_out, size_t hash_len);

/* Runs a pipeline config and returns its exit code (0, 2, 3 or 4). */
CF_API int cf_pipeline_run(const char* config_path);

#ifdef __cplusplus
}
#endif

#endif /* CORPUSFORGE_H */
