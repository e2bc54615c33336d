// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "hash.hpp"
#include "normalize.hpp"

namespace corpusforge {

struct BenchmarkItem {
    std::string item_id;
    std::string text;

    bool operator==(const BenchmarkItem&) const = default;
};

struct BenchmarkSpec {
    std::string name;
    std::vector<BenchmarkItem> test_items;
    std::vector<BenchmarkItem> train_items;

    bool operator==(const BenchmarkSpec&) const = default;
};

/// Benchmark files are JSON: one object {"name", "test": [{"item_id",
/// "text"}...], "train": [...]} or an array of such objects. Item ids must
/// be unique per split and names unique per file.
std::vector<BenchmarkSpec> load_benchmarks(const std::filesystem::path& path);
std::vector<BenchmarkSpec> parse_benchmarks(const nlohmann::json& j);
nlohmann::ordered_json benchmark_to_json(const BenchmarkSpec& spec);
void save_benchmark(const BenchmarkSpec& spec, const std::filesystem::path& path);

struct ItemHashes {
    std::string item_id;
    std::vector<Hash64> hashes;  // sorted, all present in the benchmark index
};

struct BenchmarkIndex {
    std::string name;
    std::vector<Hash64> hashes;  // sorted, unique, disjoint from the train split
    std::vector<ItemHashes> per_item;

    std::size_t total_unique() const noexcept { return hashes.size(); }
    bool contains(Hash64 h) const;
};

/// Throws Error(EmptyBenchmark) when the spec has no test items.
BenchmarkIndex build_index(const BenchmarkSpec& bench, const TextFingerprinter& fingerprinter);

/// Several benchmark indexes plus the text configuration they were built
/// with. Scans reconstruct their fingerprinter from this.
struct IndexSet {
    std::size_t n = 13;
    std::vector<std::string> stopwords;  // sorted
    std::vector<std::string> patterns;
    std::vector<BenchmarkIndex> benchmarks;

    Hash64 config_hash() const;
    TextFingerprinter fingerprinter() const;
};

IndexSet build_index_set(std::span<const BenchmarkSpec> benches,
                         const TextFingerprinter& fingerprinter);

inline constexpr char kIndexMagic[4] = {'M', 'V', 'I', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;

/// Binary layout, all integers little-endian:
///   "MVIX" u32 version u32 n u64 config_hash
///   u32 #stopwords {u32 len, bytes}...  u32 #patterns {u32 len, bytes}...
///   u32 #benchmarks, then per benchmark:
///     u32 len, name | u64 total_unique | u64 hashes[total_unique] (sorted)
///     u64 #items {u32 len, item_id, u64 offset, u64 count}...
///     u64 pool_size | u64 pool[pool_size]
/// where each item's hashes are pool[offset, offset + count).
std::string serialize_index(const IndexSet& index);
IndexSet deserialize_index(std::string_view bytes);
void save_index(const IndexSet& index, const std::filesystem::path& path);
IndexSet load_index(const std::filesystem::path& path);

struct ContaminationThresholds {
    std::size_t min_hits = 3;
    double min_coverage = 0.001;
};

/// Both criteria: distinct hits >= min_hits and hits / total >= min_coverage.
bool is_contaminated(std::size_t distinct_hits, std::size_t doc_total_unique,
                     const ContaminationThresholds& t);

struct DocContaminationRecord {
    std::string doc_id;
    std::string benchmark;
    std::size_t distinct_hits = 0;
    std::size_t doc_total_unique_ngrams = 0;
    double coverage = 0.0;
    bool contaminated = false;
};

struct DocScan {
    std::string doc_id;
    std::vector<DocContaminationRecord> records;         // one per benchmark
    std::vector<std::vector<Hash64>> matched_hashes;     // parallel to records
};

/// Fingerprints the document once and intersects with every index.
DocScan scan_doc(const Document& doc, std::span<const BenchmarkIndex> indexes,
                 const TextFingerprinter& fingerprinter, const ContaminationThresholds& t = {});

struct BenchmarkLeakage {
    std::string benchmark;
    std::uint64_t contaminated_docs = 0;
    double contamination_rate = 0.0;  // fraction of scanned docs
    std::uint64_t unique_ngrams_leaked = 0;
    std::uint64_t total_unique = 0;
    double leak_percentage = 0.0;
};

struct LeakageReport {
    std::vector<BenchmarkLeakage> benchmarks;
    std::uint64_t total_docs_scanned = 0;
    std::uint64_t overall_contaminated_docs = 0;  // contaminated for any benchmark
    double overall_contamination_rate = 0.0;
};

/// Mergeable scan aggregate for one partition of a corpus. merge() is
/// commutative and associative; a doc id seen in two partitions raises
/// Error(PartitionOverlap).
class LeakageAccumulator {
public:
    explicit LeakageAccumulator(std::span<const BenchmarkIndex> indexes);

    void add(const DocScan& scan);
    void merge(const LeakageAccumulator& other);

    LeakageReport report() const;

    /// Per benchmark, every index hash matched at least once (sorted).
    std::vector<std::vector<Hash64>> leaked_hashes() const;
    /// Ids contaminated for at least one benchmark (sorted).
    std::vector<std::string> flagged_doc_ids() const;
    /// Ids contaminated for benchmark i (sorted).
    std::vector<std::string> flagged_doc_ids(std::size_t benchmark) const;

    const std::vector<std::string>& benchmark_names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::vector<std::uint64_t> totals_;
    std::uint64_t docs_ = 0;
    std::unordered_set<std::string> seen_;
    std::vector<std::set<Hash64>> leaked_;
    std::vector<std::set<std::string>> flagged_;
};

/// Flat form: merge per-doc records and matched-hash sets into a report.
/// Throws Error(PartitionOverlap) when a doc id repeats for a benchmark.
LeakageReport aggregate_report(std::span<const DocContaminationRecord> records,
                               const std::map<std::string, std::set<Hash64>>& leaked,
                               std::span<const BenchmarkIndex> indexes);

/// Leak percentage from its two counts; 0 when the index is empty.
double leak_percentage(std::uint64_t unique_leaked, std::uint64_t total_unique);

nlohmann::ordered_json report_to_json(const LeakageReport& report);
/// Plain-text table: benchmark, contaminated docs, contamination rate (%).
std::string render_report_table(const LeakageReport& report);

/// Leak files map benchmark name -> hex hash list.
void save_leaked(const std::map<std::string, std::vector<Hash64>>& leaked,
                 const std::filesystem::path& path);
std::map<std::string, std::vector<Hash64>> load_leaked(const std::filesystem::path& path);

/// Scans `docs` with `workers` threads over strided partitions and merges
/// the partial accumulators.
LeakageAccumulator scan_documents(std::span<const Document> docs,
                                  std::span<const BenchmarkIndex> indexes,
                                  const TextFingerprinter& fingerprinter,
                                  const ContaminationThresholds& t, std::size_t workers = 1);

struct DecontamResult {
    BenchmarkSpec bench;
    std::vector<std::string> removed_ids;
};

/// Keeps test items with no hash in `leaked`; leaked hashes outside the
/// index cannot match any item and are ignored.
DecontamResult decontaminate_benchmark(const BenchmarkSpec& bench, const BenchmarkIndex& index,
                                       std::span<const Hash64> leaked);

}  // namespace corpusforge
