// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "corpus.hpp"

#include <zlib.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "util.hpp"

namespace corpusforge {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(LicenseTier tier) {
    switch (tier) {
        case LicenseTier::Tier1: return "Tier1";
        case LicenseTier::Tier2: return "Tier2";
        case LicenseTier::Tier3: return "Tier3";
        case LicenseTier::Unknown: return "Unknown";
    }
    return "Unknown";
}

const char* to_string(Category category) {
    switch (category) {
        case Category::Web: return "Web";
        case Category::Code: return "Code";
        case Category::ReasoningInstruction: return "ReasoningInstruction";
        case Category::Encyclopedic: return "Encyclopedic";
        case Category::Math: return "Math";
        case Category::MiscCurated: return "MiscCurated";
    }
    return "Web";
}

const char* to_string(SyntheticStatus status) {
    switch (status) {
        case SyntheticStatus::NonSynthetic: return "NonSynthetic";
        case SyntheticStatus::Mixed: return "Mixed";
        case SyntheticStatus::Synthetic: return "Synthetic";
    }
    return "NonSynthetic";
}

LicenseTier parse_license_tier(std::string_view s) {
    for (LicenseTier t : kAllTiers) {
        if (s == to_string(t)) return t;
    }
    throw Error(ErrorCode::MalformedRecord, "unknown license_tier '" + std::string(s) + "'");
}

Category parse_category(std::string_view s) {
    for (Category c : kAllCategories) {
        if (s == to_string(c)) return c;
    }
    throw Error(ErrorCode::MalformedRecord, "unknown category '" + std::string(s) + "'");
}

SyntheticStatus parse_synthetic_status(std::string_view s) {
    for (SyntheticStatus st : kAllStatuses) {
        if (s == to_string(st)) return st;
    }
    throw Error(ErrorCode::MalformedRecord,
                "unknown synthetic_status '" + std::string(s) + "'");
}

namespace {

constexpr std::array<std::string_view, 9> kKnownFields = {
    "id",       "url",         "text", "source", "license_tier", "category", "synthetic_status",
    "generator_provenance", "drop_reason"};

bool is_known_field(std::string_view key) {
    for (auto k : kKnownFields) {
        if (k == key) return true;
    }
    return false;
}

const std::string& require_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw Error(ErrorCode::MalformedRecord, std::string("missing or non-string field '") +
                                                    key + "'");
    }
    return it->get_ref<const std::string&>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw Error(ErrorCode::MalformedRecord, std::string("non-string field '") + key + "'");
    }
    return it->get<std::string>();
}

}  // namespace

std::string serialize_document(const Document& doc) {
    ordered_json j;
    j["id"] = doc.id;
    if (doc.url) j["url"] = *doc.url;
    j["text"] = doc.text;
    j["source"] = doc.source;
    j["license_tier"] = to_string(doc.license_tier);
    j["category"] = to_string(doc.category);
    j["synthetic_status"] = to_string(doc.synthetic_status);
    if (doc.generator_provenance) {
        j["generator_provenance"] = {{"model_name", doc.generator_provenance->model_name},
                                     {"model_license", doc.generator_provenance->model_license},
                                     {"seed_source", doc.generator_provenance->seed_source}};
    }
    if (doc.drop_reason) j["drop_reason"] = *doc.drop_reason;
    for (const auto& [key, value] : doc.extra.items()) {
        j[key] = value;
    }
    return j.dump();
}

Document parse_document(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::MalformedRecord, "record is not an object");
    }
    Document doc;
    doc.id = require_string(j, "id");
    if (doc.id.empty()) throw Error(ErrorCode::MalformedRecord, "empty id");
    doc.url = optional_string(j, "url");
    doc.text = require_string(j, "text");
    doc.source = require_string(j, "source");
    if (auto s = optional_string(j, "license_tier")) doc.license_tier = parse_license_tier(*s);
    if (auto s = optional_string(j, "category")) doc.category = parse_category(*s);
    if (auto s = optional_string(j, "synthetic_status")) {
        doc.synthetic_status = parse_synthetic_status(*s);
    }
    if (auto it = j.find("generator_provenance"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            throw Error(ErrorCode::MalformedRecord, "generator_provenance is not an object");
        }
        GeneratorProvenance p;
        p.model_name = optional_string(*it, "model_name").value_or("");
        p.model_license = optional_string(*it, "model_license").value_or("");
        p.seed_source = optional_string(*it, "seed_source").value_or("");
        doc.generator_provenance = std::move(p);
    }
    doc.drop_reason = optional_string(j, "drop_reason");
    if (doc.text.empty() && !doc.drop_reason) {
        throw Error(ErrorCode::MalformedRecord, "empty text on a record not flagged for drop");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!is_known_field(it.key())) doc.extra[it.key()] = it.value();
    }
    return doc;
}

ordered_json manifest_to_json(const ShardManifest& manifest) {
    ordered_json j;
    j["shard_id"] = manifest.shard_id;
    j["record_count"] = manifest.record_count;
    j["token_count"] = manifest.token_count;
    j["token_count_kind"] = "whitespace_proxy";
    ordered_json history = ordered_json::array();
    for (const auto& s : manifest.stage_history) {
        ordered_json h;
        h["stage_name"] = s.stage_name;
        h["config_hash"] = s.config_hash;
        h["records_in"] = s.records_in;
        h["records_out"] = s.records_out;
        history.push_back(std::move(h));
    }
    j["stage_history"] = std::move(history);
    for (const auto& [key, value] : manifest.extra.items()) {
        j[key] = value;
    }
    return j;
}

ShardManifest manifest_from_json(const json& j) {
    try {
        ShardManifest m;
        m.shard_id = j.at("shard_id").get<std::string>();
        m.record_count = j.at("record_count").get<std::uint64_t>();
        m.token_count = j.at("token_count").get<std::uint64_t>();
        for (const auto& h : j.at("stage_history")) {
            m.stage_history.push_back({h.at("stage_name").get<std::string>(),
                                       h.at("config_hash").get<std::string>(),
                                       h.at("records_in").get<std::uint64_t>(),
                                       h.at("records_out").get<std::uint64_t>()});
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            if (k != "shard_id" && k != "record_count" && k != "token_count" &&
                k != "token_count_kind" && k != "stage_history") {
                m.extra[k] = it.value();
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("bad manifest: ") + e.what());
    }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& shard) {
    return std::filesystem::path(shard.string() + ".manifest");
}

void write_manifest(const ShardManifest& manifest, const std::filesystem::path& path) {
    write_file(path, manifest_to_json(manifest).dump(2) + "\n");
}

ShardManifest read_manifest(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, "bad manifest " + path.string() + ": " + e.what());
    }
    return manifest_from_json(j);
}

std::string shard_id_for(const std::filesystem::path& shard) {
    std::string name = shard.filename().string();
    for (std::string_view suffix : {".gz", ".jsonl", ".json"}) {
        if (name.size() > suffix.size() && name.ends_with(suffix)) {
            name.resize(name.size() - suffix.size());
        }
    }
    return name;
}

std::string check_manifest(const ShardManifest& manifest, std::span<const Document> docs) {
    if (manifest.record_count != docs.size()) {
        return "record_count " + std::to_string(manifest.record_count) + " != " +
               std::to_string(docs.size()) + " records";
    }
    std::uint64_t tokens = 0;
    for (const auto& d : docs) tokens += whitespace_token_count(d.text);
    if (tokens != manifest.token_count) {
        return "token_count " + std::to_string(manifest.token_count) + " != recomputed " +
               std::to_string(tokens);
    }
    const auto& h = manifest.stage_history;
    for (std::size_t k = 1; k < h.size(); ++k) {
        if (h[k - 1].records_out != h[k].records_in) {
            return "stage '" + h[k].stage_name + "' records_in does not match previous records_out";
        }
    }
    if (!h.empty() && h.back().records_out != manifest.record_count) {
        return "last stage records_out does not match record_count";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Line I/O

class LineSource {
public:
    explicit LineSource(const std::filesystem::path& path) {
        file_ = gzopen(path.string().c_str(), "rb");
        if (file_ == nullptr) {
            throw Error(ErrorCode::Io, "cannot open " + path.string());
        }
        gzbuffer(file_, 1 << 17);
    }
    ~LineSource() {
        if (file_ != nullptr) gzclose(file_);
    }
    LineSource(const LineSource&) = delete;
    LineSource& operator=(const LineSource&) = delete;

    bool getline(std::string& line) {
        line.clear();
        bool any = false;
        while (gzgets(file_, buf_.data(), static_cast<int>(buf_.size())) != nullptr) {
            any = true;
            std::string_view chunk(buf_.data());
            if (!chunk.empty() && chunk.back() == '\n') {
                chunk.remove_suffix(1);
                line.append(chunk);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
            line.append(chunk);
        }
        int err = 0;
        gzerror(file_, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
            throw Error(ErrorCode::Io, "read error in compressed stream");
        }
        return any;
    }

private:
    gzFile file_ = nullptr;
    std::vector<char> buf_ = std::vector<char>(1 << 16);
};

class LineSink {
public:
    explicit LineSink(const std::filesystem::path& path) {
        if (path.extension() == ".gz") {
            gz_ = gzopen(path.string().c_str(), "wb");
            if (gz_ == nullptr) throw Error(ErrorCode::Io, "cannot write " + path.string());
        } else {
            out_.open(path, std::ios::binary | std::ios::trunc);
            if (!out_) throw Error(ErrorCode::Io, "cannot write " + path.string());
        }
    }
    ~LineSink() {
        if (gz_ != nullptr) gzclose(gz_);
    }
    LineSink(const LineSink&) = delete;
    LineSink& operator=(const LineSink&) = delete;

    void write_line(std::string_view line) {
        if (gz_ != nullptr) {
            if (!line.empty() &&
                gzwrite(gz_, line.data(), static_cast<unsigned>(line.size())) == 0) {
                throw Error(ErrorCode::Io, "compressed write failed");
            }
            if (gzputc(gz_, '\n') == -1) throw Error(ErrorCode::Io, "compressed write failed");
        } else {
            out_.write(line.data(), static_cast<std::streamsize>(line.size()));
            out_.put('\n');
            if (!out_) throw Error(ErrorCode::Io, "write failed");
        }
    }

    void close() {
        if (gz_ != nullptr) {
            int rc = gzclose(gz_);
            gz_ = nullptr;
            if (rc != Z_OK) throw Error(ErrorCode::Io, "compressed close failed");
        } else {
            out_.close();
            if (!out_) throw Error(ErrorCode::Io, "close failed");
        }
    }

private:
    gzFile gz_ = nullptr;
    std::ofstream out_;
};

ShardReader::ShardReader(const std::filesystem::path& path) {
    if (!std::filesystem::is_regular_file(path)) {
        throw Error(ErrorCode::Io, "no such shard: " + path.string());
    }
    source_ = std::make_unique<LineSource>(path);
}

ShardReader::~ShardReader() = default;
ShardReader::ShardReader(ShardReader&&) noexcept = default;
ShardReader& ShardReader::operator=(ShardReader&&) noexcept = default;

std::optional<ShardItem> ShardReader::next() {
    std::string line;
    while (source_->getline(line)) {
        ++line_no_;
        if (trim(line).empty()) continue;
        try {
            Document doc = parse_document(line);
            if (!seen_ids_.insert(doc.id).second) {
                return ShardItem{RecordError{line_no_, ErrorCode::DuplicateId,
                                             "duplicate id '" + doc.id + "'"}};
            }
            return ShardItem{std::move(doc)};
        } catch (const Error& e) {
            return ShardItem{RecordError{line_no_, e.code(), e.what()}};
        }
    }
    return std::nullopt;
}

ShardContents read_shard(const std::filesystem::path& path) {
    ShardContents out;
    ShardReader reader(path);
    while (auto item = reader.next()) {
        if (auto* doc = std::get_if<Document>(&*item)) {
            out.docs.push_back(std::move(*doc));
        } else {
            out.errors.push_back(std::get<RecordError>(std::move(*item)));
        }
    }
    return out;
}

ShardWriter::ShardWriter(const std::filesystem::path& path)
    : path_(path), sink_(std::make_unique<LineSink>(path)) {
    manifest_.shard_id = shard_id_for(path);
}

ShardWriter::~ShardWriter() = default;

void ShardWriter::add(const Document& doc) {
    if (!seen_ids_.insert(doc.id).second) {
        throw Error(ErrorCode::DuplicateId, "duplicate id '" + doc.id + "' in " + path_.string());
    }
    sink_->write_line(serialize_document(doc));
    ++manifest_.record_count;
    manifest_.token_count += whitespace_token_count(doc.text);
}

ShardManifest ShardWriter::finish(std::vector<StageRecord> history, nlohmann::json extra) {
    if (finished_) throw Error(ErrorCode::InvalidArgument, "writer already finished");
    finished_ = true;
    sink_->close();
    manifest_.stage_history = std::move(history);
    manifest_.extra = std::move(extra);
    write_manifest(manifest_, manifest_path_for(path_));
    return manifest_;
}

ShardManifest write_shard(std::span<const Document> docs, const std::filesystem::path& path,
                          std::vector<StageRecord> history, nlohmann::json extra) {
    ShardWriter writer(path);
    for (const auto& d : docs) writer.add(d);
    return writer.finish(std::move(history), std::move(extra));
}

}  // namespace corpusforge
