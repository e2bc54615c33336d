// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "hash.hpp"
#include "normalize.hpp"

namespace corpusforge {

/// One line of a stage drop log.
struct DropRecord {
    std::string doc_id;
    std::string stage;
    std::string reason;
    std::optional<std::string> winner_id;

    bool operator==(const DropRecord&) const = default;
};

std::string serialize_drop_record(const DropRecord& r);

inline constexpr std::size_t kDefaultPrefixTokens = 32;

struct PrefixKey {
    Hash64 hash = 0;
    std::string shard_scope;

    bool operator==(const PrefixKey&) const = default;
};

/// Hash of the first min(|tokens|, prefix_tokens) normalized tokens, or
/// nullopt when the text has no tokens at all (such documents are never
/// merged with each other).
std::optional<PrefixKey> prefix_key(const Document& doc, const StopwordSet& stopwords,
                                    std::size_t prefix_tokens = kDefaultPrefixTokens);

/// Keyed min-by-id reduction over prefix keys for a single dataset scope.
/// merge() is commutative and associative, so partial indexes built over
/// any partitioning of the scope agree once merged.
class PrefixDedupIndex {
public:
    PrefixDedupIndex(std::string scope, const StopwordSet& stopwords,
                     std::size_t prefix_tokens = kDefaultPrefixTokens);

    /// Throws Error(ScopeViolation) when doc.source differs from the scope.
    void add(const Document& doc);
    void merge(const PrefixDedupIndex& other);

    /// Winner id for the document's key (its own id when it wins).
    std::optional<std::string> winner_for(const Document& doc) const;

    const std::string& scope() const noexcept { return scope_; }
    std::size_t key_count() const noexcept { return winners_.size(); }

private:
    std::string scope_;
    const StopwordSet* stopwords_;
    std::size_t prefix_tokens_;
    std::unordered_map<Hash64, std::string> winners_;
};

struct DedupResult {
    std::vector<Document> kept;
    std::vector<DropRecord> dropped;
};

/// Among documents sharing a prefix key only the lexicographically smallest
/// id survives; the rest are dropped with reason DupPrefix. Survivors keep
/// input order.
DedupResult prefix_dedup(std::vector<Document> docs, std::string_view scope,
                         const StopwordSet& stopwords,
                         std::size_t prefix_tokens = kDefaultPrefixTokens, std::size_t workers = 1);

struct SentenceDupStats {
    std::size_t total = 0;
    std::size_t unique = 0;

    double dup_rate() const noexcept {
        return total == 0 ? 0.0 : static_cast<double>(total - unique) / static_cast<double>(total);
    }
};

SentenceDupStats sentence_dup_stats(std::string_view text);

inline constexpr double kMaxSentenceDupRate = 0.75;

struct SentenceDedupResult {
    bool dropped = false;
    SentenceDupStats stats;
    Document doc;
};

/// Drops the document (reason HighRepetition) when its sentence duplication
/// rate is strictly above max_dup_rate; otherwise keeps the first occurrence
/// of every sentence. Documents without duplicates are returned unchanged.
SentenceDedupResult sentence_dedup(Document doc, double max_dup_rate = kMaxSentenceDupRate);

}  // namespace corpusforge
