// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "decontam.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "error.hpp"
#include "util.hpp"

namespace corpusforge {

namespace {

using nlohmann::json;

std::vector<BenchmarkItem> parse_items(const json& j, const std::string& bench,
                                       const char* split) {
    std::vector<BenchmarkItem> items;
    if (!j.contains(split) || j.at(split).is_null()) return items;
    const json& arr = j.at(split);
    if (!arr.is_array()) {
        throw Error(ErrorCode::Format, "benchmark '" + bench + "': '" + split + "' must be an array");
    }
    std::unordered_set<std::string> ids;
    for (const auto& it : arr) {
        if (!it.is_object() || !it.contains("item_id") || !it.contains("text") ||
            !it.at("item_id").is_string() || !it.at("text").is_string()) {
            throw Error(ErrorCode::Format,
                        "benchmark '" + bench + "': items need string 'item_id' and 'text'");
        }
        BenchmarkItem item{it.at("item_id").get<std::string>(), it.at("text").get<std::string>()};
        if (!ids.insert(item.item_id).second) {
            throw Error(ErrorCode::DuplicateId, "benchmark '" + bench + "': duplicate " + split +
                                                    " item_id '" + item.item_id + "'");
        }
        items.push_back(std::move(item));
    }
    return items;
}

BenchmarkSpec parse_one(const json& j) {
    if (!j.is_object() || !j.contains("name") || !j.at("name").is_string()) {
        throw Error(ErrorCode::Format, "benchmark spec needs a string 'name'");
    }
    BenchmarkSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.test_items = parse_items(j, spec.name, "test");
    spec.train_items = parse_items(j, spec.name, "train");
    return spec;
}

std::vector<Hash64> sorted_union(std::vector<Hash64> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Little-endian encoder / decoder for the index file.
class Writer {
public:
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void str(std::string_view s) {
        if (s.size() > UINT32_MAX) throw Error(ErrorCode::Format, "string too long for index");
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }
    void bytes(std::string_view s) { out_.append(s); }
    std::string take() { return std::move(out_); }

private:
    void put(std::uint64_t v, int width) {
        for (int i = 0; i < width; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    std::string out_;
};

class Reader {
public:
    explicit Reader(std::string_view in) : in_(in) {}
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }
    std::string str() {
        std::uint32_t len = u32();
        need(len);
        std::string s(in_.substr(pos_, len));
        pos_ += len;
        return s;
    }
    std::string_view raw(std::size_t len) {
        need(len);
        auto s = in_.substr(pos_, len);
        pos_ += len;
        return s;
    }
    // Guards element counts read from the file before allocating.
    void need_elements(std::uint64_t count, std::size_t width) {
        if (count > (in_.size() - pos_) / width) truncated();
    }
    bool done() const { return pos_ == in_.size(); }

private:
    std::uint64_t get(int width) {
        need(static_cast<std::size_t>(width));
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }
    void need(std::size_t len) {
        if (len > in_.size() - pos_) truncated();
    }
    [[noreturn]] static void truncated() {
        throw Error(ErrorCode::Format, "index file truncated or corrupt");
    }
    std::string_view in_;
    std::size_t pos_ = 0;
};

std::string format_percent(double fraction_times_100, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f%%", decimals, fraction_times_100);
    return buf;
}

}  // namespace

std::vector<BenchmarkSpec> parse_benchmarks(const json& j) {
    std::vector<BenchmarkSpec> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(parse_one(e));
    } else {
        out.push_back(parse_one(j));
    }
    std::unordered_set<std::string> names;
    for (const auto& b : out) {
        if (!names.insert(b.name).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate benchmark name '" + b.name + "'");
        }
    }
    return out;
}

std::vector<BenchmarkSpec> load_benchmarks(const std::filesystem::path& path) {
    std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, path.string() + ": " + e.what());
    }
    return parse_benchmarks(j);
}

nlohmann::ordered_json benchmark_to_json(const BenchmarkSpec& spec) {
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    auto items = [](const std::vector<BenchmarkItem>& v) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& it : v) {
            nlohmann::ordered_json o;
            o["item_id"] = it.item_id;
            o["text"] = it.text;
            arr.push_back(std::move(o));
        }
        return arr;
    };
    j["test"] = items(spec.test_items);
    if (!spec.train_items.empty()) j["train"] = items(spec.train_items);
    return j;
}

void save_benchmark(const BenchmarkSpec& spec, const std::filesystem::path& path) {
    write_file(path, benchmark_to_json(spec).dump(2) + "\n");
}

bool BenchmarkIndex::contains(Hash64 h) const {
    return std::binary_search(hashes.begin(), hashes.end(), h);
}

BenchmarkIndex build_index(const BenchmarkSpec& bench, const TextFingerprinter& fingerprinter) {
    if (bench.test_items.empty()) {
        throw Error(ErrorCode::EmptyBenchmark, "benchmark '" + bench.name + "' has no test items");
    }
    BenchmarkIndex index;
    index.name = bench.name;

    std::vector<std::vector<Hash64>> item_hashes;
    item_hashes.reserve(bench.test_items.size());
    std::vector<Hash64> all;
    for (const auto& item : bench.test_items) {
        auto fp = fingerprinter.fingerprint(item.text);
        all.insert(all.end(), fp.hashes.begin(), fp.hashes.end());
        item_hashes.push_back(std::move(fp.hashes));
    }
    all = sorted_union(std::move(all));

    std::vector<Hash64> train;
    for (const auto& item : bench.train_items) {
        auto fp = fingerprinter.fingerprint(item.text);
        train.insert(train.end(), fp.hashes.begin(), fp.hashes.end());
    }
    train = sorted_union(std::move(train));
    std::set_difference(all.begin(), all.end(), train.begin(), train.end(),
                        std::back_inserter(index.hashes));

    for (std::size_t i = 0; i < bench.test_items.size(); ++i) {
        ItemHashes ih{bench.test_items[i].item_id, {}};
        for (Hash64 h : item_hashes[i]) {
            if (index.contains(h)) ih.hashes.push_back(h);
        }
        index.per_item.push_back(std::move(ih));
    }
    return index;
}

Hash64 IndexSet::config_hash() const { return fingerprinter().config_hash(); }

TextFingerprinter IndexSet::fingerprinter() const {
    StopwordSet sw(stopwords.begin(), stopwords.end());
    return TextFingerprinter(std::move(sw), PatternSet::compile(patterns), n);
}

IndexSet build_index_set(std::span<const BenchmarkSpec> benches,
                         const TextFingerprinter& fingerprinter) {
    IndexSet set;
    set.n = fingerprinter.n();
    set.stopwords.assign(fingerprinter.stopwords().begin(), fingerprinter.stopwords().end());
    std::sort(set.stopwords.begin(), set.stopwords.end());
    set.patterns = fingerprinter.patterns().sources();
    std::unordered_set<std::string> names;
    for (const auto& b : benches) {
        if (!names.insert(b.name).second) {
            throw Error(ErrorCode::DuplicateId, "duplicate benchmark name '" + b.name + "'");
        }
        set.benchmarks.push_back(build_index(b, fingerprinter));
    }
    return set;
}

std::string serialize_index(const IndexSet& index) {
    Writer w;
    w.bytes(std::string_view(kIndexMagic, 4));
    w.u32(kIndexVersion);
    w.u32(static_cast<std::uint32_t>(index.n));
    w.u64(index.config_hash());
    w.u32(static_cast<std::uint32_t>(index.stopwords.size()));
    for (const auto& s : index.stopwords) w.str(s);
    w.u32(static_cast<std::uint32_t>(index.patterns.size()));
    for (const auto& p : index.patterns) w.str(p);
    w.u32(static_cast<std::uint32_t>(index.benchmarks.size()));
    for (const auto& b : index.benchmarks) {
        w.str(b.name);
        w.u64(b.hashes.size());
        for (Hash64 h : b.hashes) w.u64(h);
        w.u64(b.per_item.size());
        std::uint64_t offset = 0;
        for (const auto& item : b.per_item) {
            w.str(item.item_id);
            w.u64(offset);
            w.u64(item.hashes.size());
            offset += item.hashes.size();
        }
        w.u64(offset);
        for (const auto& item : b.per_item) {
            for (Hash64 h : item.hashes) w.u64(h);
        }
    }
    return w.take();
}

IndexSet deserialize_index(std::string_view bytes) {
    Reader r(bytes);
    if (r.raw(4) != std::string_view(kIndexMagic, 4)) {
        throw Error(ErrorCode::Format, "not an index file (bad magic)");
    }
    std::uint32_t version = r.u32();
    if (version != kIndexVersion) {
        throw Error(ErrorCode::Format, "unsupported index version " + std::to_string(version));
    }
    IndexSet set;
    set.n = r.u32();
    if (set.n < 1) throw Error(ErrorCode::InvalidN, "index n must be >= 1");
    Hash64 stored_hash = r.u64();
    std::uint32_t count = r.u32();
    r.need_elements(count, 4);
    for (std::uint32_t i = 0; i < count; ++i) set.stopwords.push_back(r.str());
    count = r.u32();
    r.need_elements(count, 4);
    for (std::uint32_t i = 0; i < count; ++i) set.patterns.push_back(r.str());
    if (set.config_hash() != stored_hash) {
        throw Error(ErrorCode::ConfigMismatch, "index configuration hash does not match its contents");
    }
    count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        BenchmarkIndex b;
        b.name = r.str();
        std::uint64_t total = r.u64();
        r.need_elements(total, 8);
        b.hashes.resize(total);
        for (auto& h : b.hashes) h = r.u64();
        if (!std::is_sorted(b.hashes.begin(), b.hashes.end()) ||
            std::adjacent_find(b.hashes.begin(), b.hashes.end()) != b.hashes.end()) {
            throw Error(ErrorCode::Format, "index hashes for '" + b.name + "' are not sorted and unique");
        }
        std::uint64_t items = r.u64();
        r.need_elements(items, 20);
        struct Slot {
            std::uint64_t offset, count;
        };
        std::vector<Slot> slots;
        for (std::uint64_t k = 0; k < items; ++k) {
            ItemHashes ih;
            ih.item_id = r.str();
            std::uint64_t off = r.u64();
            std::uint64_t cnt = r.u64();
            slots.push_back({off, cnt});
            b.per_item.push_back(std::move(ih));
        }
        std::uint64_t pool_size = r.u64();
        r.need_elements(pool_size, 8);
        std::vector<Hash64> pool(pool_size);
        for (auto& h : pool) h = r.u64();
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const auto& s = slots[k];
            if (s.offset > pool_size || s.count > pool_size - s.offset) {
                throw Error(ErrorCode::Format, "index item table out of range");
            }
            b.per_item[k].hashes.assign(pool.begin() + static_cast<std::ptrdiff_t>(s.offset),
                                        pool.begin() + static_cast<std::ptrdiff_t>(s.offset + s.count));
            for (Hash64 h : b.per_item[k].hashes) {
                if (!b.contains(h)) throw Error(ErrorCode::Format, "item hash outside index");
            }
        }
        set.benchmarks.push_back(std::move(b));
    }
    if (!r.done()) throw Error(ErrorCode::Format, "trailing bytes after index");
    return set;
}

void save_index(const IndexSet& index, const std::filesystem::path& path) {
    write_file(path, serialize_index(index));
}

IndexSet load_index(const std::filesystem::path& path) {
    return deserialize_index(read_file(path));
}

bool is_contaminated(std::size_t distinct_hits, std::size_t doc_total_unique,
                     const ContaminationThresholds& t) {
    if (doc_total_unique == 0) return false;
    double coverage = static_cast<double>(distinct_hits) / static_cast<double>(doc_total_unique);
    return distinct_hits >= t.min_hits && coverage >= t.min_coverage;
}

DocScan scan_doc(const Document& doc, std::span<const BenchmarkIndex> indexes,
                 const TextFingerprinter& fingerprinter, const ContaminationThresholds& t) {
    DocScan out;
    out.doc_id = doc.id;
    auto fp = fingerprinter.fingerprint(doc.text);
    std::size_t total = fp.total_unique();
    for (const auto& index : indexes) {
        // Documents are tiny next to a large index: search each document
        // hash instead of walking the whole index.
        std::vector<Hash64> matched;
        auto lo = index.hashes.begin();
        for (Hash64 h : fp.hashes) {
            lo = std::lower_bound(lo, index.hashes.end(), h);
            if (lo == index.hashes.end()) break;
            if (*lo == h) matched.push_back(h);
        }
        DocContaminationRecord rec;
        rec.doc_id = doc.id;
        rec.benchmark = index.name;
        rec.distinct_hits = matched.size();
        rec.doc_total_unique_ngrams = total;
        rec.coverage = total == 0 ? 0.0 : static_cast<double>(matched.size()) / static_cast<double>(total);
        rec.contaminated = is_contaminated(matched.size(), total, t);
        out.records.push_back(std::move(rec));
        out.matched_hashes.push_back(std::move(matched));
    }
    return out;
}

double leak_percentage(std::uint64_t unique_leaked, std::uint64_t total_unique) {
    if (total_unique == 0) return 0.0;
    return static_cast<double>(unique_leaked) / static_cast<double>(total_unique) * 100.0;
}

LeakageAccumulator::LeakageAccumulator(std::span<const BenchmarkIndex> indexes)
    : leaked_(indexes.size()), flagged_(indexes.size()) {
    for (const auto& i : indexes) {
        names_.push_back(i.name);
        totals_.push_back(i.total_unique());
    }
}

void LeakageAccumulator::add(const DocScan& scan) {
    if (scan.records.size() != names_.size()) {
        throw Error(ErrorCode::InvalidArgument, "scan does not match the accumulator's benchmarks");
    }
    const std::string& id = scan.doc_id;
    if (!seen_.insert(id).second) {
        throw Error(ErrorCode::PartitionOverlap, "document '" + id + "' scanned twice");
    }
    ++docs_;
    for (std::size_t b = 0; b < names_.size(); ++b) {
        leaked_[b].insert(scan.matched_hashes[b].begin(), scan.matched_hashes[b].end());
        if (scan.records[b].contaminated) flagged_[b].insert(id);
    }
}

void LeakageAccumulator::merge(const LeakageAccumulator& other) {
    if (other.names_ != names_) {
        throw Error(ErrorCode::InvalidArgument, "cannot merge accumulators over different benchmarks");
    }
    for (const auto& id : other.seen_) {
        if (seen_.count(id)) {
            throw Error(ErrorCode::PartitionOverlap, "document '" + id + "' appears in two partitions");
        }
    }
    seen_.insert(other.seen_.begin(), other.seen_.end());
    docs_ += other.docs_;
    for (std::size_t b = 0; b < names_.size(); ++b) {
        leaked_[b].insert(other.leaked_[b].begin(), other.leaked_[b].end());
        flagged_[b].insert(other.flagged_[b].begin(), other.flagged_[b].end());
    }
}

LeakageReport LeakageAccumulator::report() const {
    LeakageReport r;
    r.total_docs_scanned = docs_;
    for (std::size_t b = 0; b < names_.size(); ++b) {
        BenchmarkLeakage bl;
        bl.benchmark = names_[b];
        bl.contaminated_docs = flagged_[b].size();
        bl.contamination_rate =
            docs_ == 0 ? 0.0 : static_cast<double>(bl.contaminated_docs) / static_cast<double>(docs_);
        bl.unique_ngrams_leaked = leaked_[b].size();
        bl.total_unique = totals_[b];
        bl.leak_percentage = leak_percentage(bl.unique_ngrams_leaked, bl.total_unique);
        r.benchmarks.push_back(std::move(bl));
    }
    r.overall_contaminated_docs = flagged_doc_ids().size();
    r.overall_contamination_rate =
        docs_ == 0 ? 0.0
                   : static_cast<double>(r.overall_contaminated_docs) / static_cast<double>(docs_);
    return r;
}

std::vector<std::vector<Hash64>> LeakageAccumulator::leaked_hashes() const {
    std::vector<std::vector<Hash64>> out;
    for (const auto& s : leaked_) out.emplace_back(s.begin(), s.end());
    return out;
}

std::vector<std::string> LeakageAccumulator::flagged_doc_ids() const {
    std::set<std::string> all;
    for (const auto& s : flagged_) all.insert(s.begin(), s.end());
    return {all.begin(), all.end()};
}

std::vector<std::string> LeakageAccumulator::flagged_doc_ids(std::size_t benchmark) const {
    const auto& s = flagged_.at(benchmark);
    return {s.begin(), s.end()};
}

LeakageReport aggregate_report(std::span<const DocContaminationRecord> records,
                               const std::map<std::string, std::set<Hash64>>& leaked,
                               std::span<const BenchmarkIndex> indexes) {
    std::map<std::string, std::size_t> slot;
    for (std::size_t b = 0; b < indexes.size(); ++b) slot[indexes[b].name] = b;

    std::vector<std::set<std::string>> seen(indexes.size());
    std::vector<std::uint64_t> flagged(indexes.size(), 0);
    std::set<std::string> docs;
    std::set<std::string> any;
    for (const auto& rec : records) {
        auto it = slot.find(rec.benchmark);
        if (it == slot.end()) {
            throw Error(ErrorCode::InvalidArgument, "record for unknown benchmark '" + rec.benchmark + "'");
        }
        if (!seen[it->second].insert(rec.doc_id).second) {
            throw Error(ErrorCode::PartitionOverlap,
                        "document '" + rec.doc_id + "' reported twice for '" + rec.benchmark + "'");
        }
        docs.insert(rec.doc_id);
        if (rec.contaminated) {
            ++flagged[it->second];
            any.insert(rec.doc_id);
        }
    }

    LeakageReport r;
    r.total_docs_scanned = docs.size();
    for (std::size_t b = 0; b < indexes.size(); ++b) {
        BenchmarkLeakage bl;
        bl.benchmark = indexes[b].name;
        bl.contaminated_docs = flagged[b];
        bl.contamination_rate = docs.empty() ? 0.0
                                             : static_cast<double>(flagged[b]) /
                                                   static_cast<double>(docs.size());
        auto lk = leaked.find(bl.benchmark);
        if (lk != leaked.end()) {
            for (Hash64 h : lk->second) {
                if (indexes[b].contains(h)) ++bl.unique_ngrams_leaked;
            }
        }
        bl.total_unique = indexes[b].total_unique();
        bl.leak_percentage = leak_percentage(bl.unique_ngrams_leaked, bl.total_unique);
        r.benchmarks.push_back(std::move(bl));
    }
    r.overall_contaminated_docs = any.size();
    r.overall_contamination_rate =
        docs.empty() ? 0.0 : static_cast<double>(any.size()) / static_cast<double>(docs.size());
    return r;
}

nlohmann::ordered_json report_to_json(const LeakageReport& report) {
    nlohmann::ordered_json j;
    j["total_docs_scanned"] = report.total_docs_scanned;
    j["overall_contaminated_docs"] = report.overall_contaminated_docs;
    j["overall_contamination_rate"] = report.overall_contamination_rate;
    j["benchmarks"] = nlohmann::ordered_json::array();
    for (const auto& b : report.benchmarks) {
        nlohmann::ordered_json o;
        o["benchmark"] = b.benchmark;
        o["contaminated_docs"] = b.contaminated_docs;
        o["contamination_rate"] = b.contamination_rate;
        o["unique_ngrams_leaked"] = b.unique_ngrams_leaked;
        o["total_unique"] = b.total_unique;
        o["leak_percentage"] = b.leak_percentage;
        j["benchmarks"].push_back(std::move(o));
    }
    return j;
}

std::string render_report_table(const LeakageReport& report) {
    std::vector<std::array<std::string, 3>> rows;
    rows.push_back({"Benchmark", "Contaminated Docs", "Contamination Rate (%)"});
    for (const auto& b : report.benchmarks) {
        rows.push_back({b.benchmark, with_thousands(b.contaminated_docs),
                        format_percent(b.contamination_rate * 100.0, 4)});
    }
    std::size_t w0 = 0, w1 = 0;
    for (const auto& r : rows) {
        w0 = std::max(w0, r[0].size());
        w1 = std::max(w1, r[1].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        os << r[0] << std::string(w0 - r[0].size() + 2, ' ') << std::string(w1 - r[1].size(), ' ')
           << r[1] << "  " << r[2] << "\n";
    }
    os << "Total documents scanned: " << with_thousands(report.total_docs_scanned) << "\n";
    os << "Overall contamination rate: "
       << format_percent(report.overall_contamination_rate * 100.0, 4) << "\n";
    return os.str();
}

void save_leaked(const std::map<std::string, std::vector<Hash64>>& leaked,
                 const std::filesystem::path& path) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, hashes] : leaked) {
        auto arr = nlohmann::ordered_json::array();
        for (Hash64 h : hashes) arr.push_back(hash_to_hex(h));
        j[name] = std::move(arr);
    }
    write_file(path, j.dump(1) + "\n");
}

std::map<std::string, std::vector<Hash64>> load_leaked(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Format, "leaked-hash file must be a JSON object");
    std::map<std::string, std::vector<Hash64>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_array()) {
            throw Error(ErrorCode::Format, "leaked hashes for '" + it.key() + "' must be an array");
        }
        std::vector<Hash64> v;
        for (const auto& h : it.value()) {
            if (!h.is_string()) throw Error(ErrorCode::Format, "leaked hashes must be hex strings");
            v.push_back(hash_from_hex(h.get<std::string>()));
        }
        out[it.key()] = sorted_union(std::move(v));
    }
    return out;
}

LeakageAccumulator scan_documents(std::span<const Document> docs,
                                  std::span<const BenchmarkIndex> indexes,
                                  const TextFingerprinter& fingerprinter,
                                  const ContaminationThresholds& t, std::size_t workers) {
    workers = std::max<std::size_t>(1, std::min(workers, docs.size()));
    std::vector<LeakageAccumulator> partials(workers, LeakageAccumulator(indexes));
    run_workers(workers, [&](std::size_t w) {
        for (std::size_t i = w; i < docs.size(); i += workers) {
            partials[w].add(scan_doc(docs[i], indexes, fingerprinter, t));
        }
    });
    for (std::size_t w = 1; w < workers; ++w) partials[0].merge(partials[w]);
    return std::move(partials[0]);
}

DecontamResult decontaminate_benchmark(const BenchmarkSpec& bench, const BenchmarkIndex& index,
                                       std::span<const Hash64> leaked) {
    std::vector<Hash64> lk(leaked.begin(), leaked.end());
    lk = sorted_union(std::move(lk));
    std::unordered_map<std::string, const ItemHashes*> by_id;
    for (const auto& ih : index.per_item) by_id[ih.item_id] = &ih;

    DecontamResult out;
    out.bench.name = bench.name;
    out.bench.train_items = bench.train_items;
    for (const auto& item : bench.test_items) {
        bool hit = false;
        auto it = by_id.find(item.item_id);
        if (it != by_id.end()) {
            for (Hash64 h : it->second->hashes) {
                if (std::binary_search(lk.begin(), lk.end(), h)) {
                    hit = true;
                    break;
                }
            }
        }
        if (hit) {
            out.removed_ids.push_back(item.item_id);
        } else {
            out.bench.test_items.push_back(item);
        }
    }
    return out;
}

}  // namespace corpusforge
