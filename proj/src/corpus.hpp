// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace corpusforge {

enum class LicenseTier { Tier1, Tier2, Tier3, Unknown };
enum class Category { Web, Code, ReasoningInstruction, Encyclopedic, Math, MiscCurated };
enum class SyntheticStatus { NonSynthetic, Mixed, Synthetic };

const char* to_string(LicenseTier tier);
const char* to_string(Category category);
const char* to_string(SyntheticStatus status);
LicenseTier parse_license_tier(std::string_view s);
Category parse_category(std::string_view s);
SyntheticStatus parse_synthetic_status(std::string_view s);

inline constexpr Category kAllCategories[] = {
    Category::Web,  Category::Code,        Category::ReasoningInstruction,
    Category::Encyclopedic, Category::Math, Category::MiscCurated};
inline constexpr LicenseTier kAllTiers[] = {LicenseTier::Tier1, LicenseTier::Tier2,
                                            LicenseTier::Tier3, LicenseTier::Unknown};
inline constexpr SyntheticStatus kAllStatuses[] = {
    SyntheticStatus::NonSynthetic, SyntheticStatus::Mixed, SyntheticStatus::Synthetic};

struct GeneratorProvenance {
    std::string model_name;
    std::string model_license;
    std::string seed_source;

    bool operator==(const GeneratorProvenance&) const = default;
};

/// One corpus record. Fields not modelled here are kept in `extra` and
/// written back unchanged.
struct Document {
    std::string id;
    std::optional<std::string> url;
    std::string text;
    std::string source;
    LicenseTier license_tier = LicenseTier::Unknown;
    Category category = Category::Web;
    SyntheticStatus synthetic_status = SyntheticStatus::NonSynthetic;
    std::optional<GeneratorProvenance> generator_provenance;
    /// Set when an upstream stage flagged the record; only such records may
    /// carry empty text.
    std::optional<std::string> drop_reason;
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const Document&) const = default;
};

/// Serializes to a single JSON line (no trailing newline). Field order is
/// fixed; extra fields follow in key order.
std::string serialize_document(const Document& doc);

/// Throws Error(MalformedRecord) for anything that is not a valid record.
Document parse_document(std::string_view line);

struct StageRecord {
    std::string stage_name;
    std::string config_hash;
    std::uint64_t records_in = 0;
    std::uint64_t records_out = 0;

    bool operator==(const StageRecord&) const = default;
};

struct ShardManifest {
    std::string shard_id;
    std::uint64_t record_count = 0;
    std::uint64_t token_count = 0;
    std::vector<StageRecord> stage_history;
    /// Stage-specific summaries (packing fill ratio, malformed line count...).
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const ShardManifest&) const = default;
};

nlohmann::ordered_json manifest_to_json(const ShardManifest& manifest);
ShardManifest manifest_from_json(const nlohmann::json& j);

std::filesystem::path manifest_path_for(const std::filesystem::path& shard);
void write_manifest(const ShardManifest& manifest, const std::filesystem::path& path);
ShardManifest read_manifest(const std::filesystem::path& path);

/// Shard id derived from the file name, minus ".gz" and ".jsonl".
std::string shard_id_for(const std::filesystem::path& shard);

/// Checks the manifest against the records it describes: counts, token
/// totals, and the records_out -> records_in chaining of its history.
/// Returns an empty string when consistent, else a description.
std::string check_manifest(const ShardManifest& manifest, std::span<const Document> docs);

struct RecordError {
    std::size_t line_no = 0;  // 1-based
    ErrorCode code = ErrorCode::MalformedRecord;
    std::string message;
};

using ShardItem = std::variant<Document, RecordError>;

class LineSource;

/// Streams records from a line-delimited shard (optionally gzip-compressed,
/// detected by ".gz" suffix). Malformed lines come back as RecordError items
/// instead of ending the stream.
class ShardReader {
public:
    explicit ShardReader(const std::filesystem::path& path);
    ~ShardReader();
    ShardReader(ShardReader&&) noexcept;
    ShardReader& operator=(ShardReader&&) noexcept;

    std::optional<ShardItem> next();

private:
    std::unique_ptr<LineSource> source_;
    std::size_t line_no_ = 0;
    std::unordered_set<std::string> seen_ids_;
};

struct ShardContents {
    std::vector<Document> docs;
    std::vector<RecordError> errors;
};

ShardContents read_shard(const std::filesystem::path& path);

class LineSink;

/// Writes records and, on finish(), the `<shard>.manifest` sidecar.
class ShardWriter {
public:
    explicit ShardWriter(const std::filesystem::path& path);
    ~ShardWriter();
    ShardWriter(const ShardWriter&) = delete;
    ShardWriter& operator=(const ShardWriter&) = delete;

    /// Throws Error(DuplicateId) on a repeated id.
    void add(const Document& doc);
    ShardManifest finish(std::vector<StageRecord> history = {},
                         nlohmann::json extra = nlohmann::json::object());

private:
    std::filesystem::path path_;
    std::unique_ptr<LineSink> sink_;
    std::unordered_set<std::string> seen_ids_;
    ShardManifest manifest_;
    bool finished_ = false;
};

ShardManifest write_shard(std::span<const Document> docs, const std::filesystem::path& path,
                          std::vector<StageRecord> history = {},
                          nlohmann::json extra = nlohmann::json::object());

}  // namespace corpusforge
