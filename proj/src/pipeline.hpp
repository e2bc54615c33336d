// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "dedup.hpp"

namespace corpusforge {

enum class StageKind { LicenseFilter, SafetyQuality, Dedup, Curation, Decontam, Report };

const char* to_string(StageKind kind);
StageKind parse_stage_kind(std::string_view name);

struct StageConfig {
    StageKind kind = StageKind::LicenseFilter;
    /// Stage parameters with file references resolved to absolute paths.
    nlohmann::json params = nlohmann::json::object();
    /// Hash of the canonical parameters and the referenced file contents.
    std::string hash;
};

/// Declarative pipeline description. All relative paths in the file are
/// resolved against the file's directory.
struct PipelineConfig {
    std::filesystem::path base_dir;
    std::vector<std::string> input_globs;
    std::vector<std::filesystem::path> inputs;  // expanded, sorted
    std::filesystem::path output_dir;
    std::size_t workers = 1;
    std::vector<StageConfig> stages;
    std::string config_hash;
};

/// Throws Error(Config) on unknown keys or stages, missing files, empty
/// globs, colliding outputs or unparseable rule files.
PipelineConfig load_pipeline_config(const std::filesystem::path& file);
PipelineConfig parse_pipeline_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Worker count after the CORPUSFORGE_WORKERS override.
std::size_t effective_workers(std::size_t configured);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStage = 3;
inline constexpr int kExitIo = 4;

struct PipelineResult {
    int exit_code = kExitOk;
    std::string message;
    std::vector<ShardManifest> manifests;  // shards written, in input order
    std::vector<DropRecord> drops;
};

/// Runs every stage over every input shard and writes, under output_dir:
/// the output shards with manifests, drops.jsonl, run_manifest.json and the
/// decontam/report outputs of those stages. Never throws; failures map to
/// the exit codes above and leave already written shards in place.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// Loads and runs; config problems become kExitConfig.
PipelineResult run_pipeline_file(const std::filesystem::path& config_file);

}  // namespace corpusforge
