// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"
#include "dedup.hpp"

namespace corpusforge {

struct TrimOptions {
    std::size_t window = 8;
    std::size_t min_docs = 100;
    double min_fraction = 0.01;
};

struct TrimResult {
    std::vector<Document> docs;
    std::size_t prefixes_trimmed = 0;
    std::size_t suffixes_trimmed = 0;
};

/// Strips the leading and trailing whitespace-token window from every
/// document whose window is shared by at least
/// max(min_docs, ceil(min_fraction * shard size)) documents. Applied once.
/// A document trimmed down to nothing keeps empty text and gets drop_reason.
TrimResult trim_boilerplate_ngrams(std::vector<Document> docs, const TrimOptions& options = {});

/// Host with scheme, port and a leading "www." removed; the source name when
/// the document has no parseable URL.
std::string base_url_key(const Document& doc);

struct DomainCluster {
    std::string key;
    std::vector<Document> docs;  // ordered by id

    std::vector<std::string> doc_ids() const;
};

/// Partitions by base_url_key. Clusters come back ordered by key.
std::vector<DomainCluster> cluster_by_base_url(std::vector<Document> docs);

inline constexpr std::size_t kDefaultTargetTokens = 4096;

/// Where one piece of a training example came from.
struct ExamplePiece {
    std::string doc_id;
    std::size_t segment_index = 0;
    std::size_t segment_count = 1;
    std::size_t token_count = 0;
};

struct TrainingExample {
    std::string example_id;
    std::string cluster_key;
    std::vector<std::string> doc_ids;
    std::vector<ExamplePiece> pieces;
    std::string text;
    std::size_t token_count = 0;
};

inline constexpr std::string_view kPieceSeparator = "\n\n";

/// Consecutive substrings of `text`, each holding at most target_tokens
/// whitespace tokens, cut at sentence starts where possible and at token
/// starts otherwise. Concatenating them gives back `text` exactly.
std::vector<std::string> split_for_packing(std::string_view text, std::size_t target_tokens);

/// Greedy first-fit per cluster in document-id order. Documents over the
/// target are split with split_for_packing first. Throws
/// Error(InvalidTarget) when target_tokens < 1.
std::vector<TrainingExample> pack_examples(std::span<const DomainCluster> clusters,
                                           std::size_t target_tokens = kDefaultTargetTokens);

double mean_fill_ratio(std::span<const TrainingExample> examples, std::size_t target_tokens);

/// Record form of an example, for writing with the shard writer. Source,
/// tier, category and synthetic status come from `first_member`.
Document example_to_document(const TrainingExample& example, const Document& first_member);

}  // namespace corpusforge
