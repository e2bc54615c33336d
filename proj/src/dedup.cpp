// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "dedup.hpp"

#include <algorithm>
#include <unordered_set>

#include "util.hpp"

namespace corpusforge {

std::string serialize_drop_record(const DropRecord& r) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["stage"] = r.stage;
    j["reason"] = r.reason;
    if (r.winner_id) j["winner_id"] = *r.winner_id;
    return j.dump();
}

std::optional<PrefixKey> prefix_key(const Document& doc, const StopwordSet& stopwords,
                                    std::size_t prefix_tokens) {
    const auto normalized = normalize_text(doc.text, stopwords);
    if (normalized.tokens.empty()) return std::nullopt;
    const std::size_t count = std::min(normalized.tokens.size(), prefix_tokens);
    return PrefixKey{hash_tokens(normalized.tokens, 0, count), doc.source};
}

PrefixDedupIndex::PrefixDedupIndex(std::string scope, const StopwordSet& stopwords,
                                   std::size_t prefix_tokens)
    : scope_(std::move(scope)), stopwords_(&stopwords), prefix_tokens_(prefix_tokens) {
    if (prefix_tokens_ == 0) throw Error(ErrorCode::InvalidArgument, "prefix length must be >= 1");
}

void PrefixDedupIndex::add(const Document& doc) {
    if (doc.source != scope_) {
        throw Error(ErrorCode::ScopeViolation, "document '" + doc.id + "' from source '" +
                                                   doc.source + "' in dedup scope '" + scope_ + "'");
    }
    auto key = prefix_key(doc, *stopwords_, prefix_tokens_);
    if (!key) return;
    auto [it, inserted] = winners_.emplace(key->hash, doc.id);
    if (!inserted && doc.id < it->second) it->second = doc.id;
}

void PrefixDedupIndex::merge(const PrefixDedupIndex& other) {
    if (other.scope_ != scope_ || other.prefix_tokens_ != prefix_tokens_) {
        throw Error(ErrorCode::ScopeViolation,
                    "cannot merge dedup scope '" + other.scope_ + "' into '" + scope_ + "'");
    }
    for (const auto& [hash, id] : other.winners_) {
        auto [it, inserted] = winners_.emplace(hash, id);
        if (!inserted && id < it->second) it->second = id;
    }
}

std::optional<std::string> PrefixDedupIndex::winner_for(const Document& doc) const {
    auto key = prefix_key(doc, *stopwords_, prefix_tokens_);
    if (!key) return std::nullopt;
    auto it = winners_.find(key->hash);
    if (it == winners_.end()) return std::nullopt;
    return it->second;
}

DedupResult prefix_dedup(std::vector<Document> docs, std::string_view scope,
                         const StopwordSet& stopwords, std::size_t prefix_tokens,
                         std::size_t workers) {
    workers = std::max<std::size_t>(1, std::min(workers, docs.size()));
    std::vector<PrefixDedupIndex> partials;
    for (std::size_t w = 0; w < workers; ++w) {
        partials.emplace_back(std::string(scope), stopwords, prefix_tokens);
    }
    auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < docs.size(); i += workers) {
            partials[w].add(docs[i]);
        }
    };
    run_workers(workers, run);
    for (std::size_t w = 1; w < workers; ++w) partials[0].merge(partials[w]);
    const PrefixDedupIndex& index = partials[0];

    DedupResult out;
    for (auto& doc : docs) {
        auto winner = index.winner_for(doc);
        if (winner && *winner != doc.id) {
            out.dropped.push_back({doc.id, "dedup", "DupPrefix", *winner});
        } else {
            out.kept.push_back(std::move(doc));
        }
    }
    return out;
}

SentenceDupStats sentence_dup_stats(std::string_view text) {
    SentenceDupStats stats;
    std::unordered_set<std::string_view> seen;
    for (const auto& span : sentence_spans(text)) {
        ++stats.total;
        if (seen.insert(text.substr(span.begin, span.end - span.begin)).second) ++stats.unique;
    }
    return stats;
}

SentenceDedupResult sentence_dedup(Document doc, double max_dup_rate) {
    SentenceDedupResult out;
    const std::string_view text = doc.text;
    const auto spans = sentence_spans(text);
    out.stats.total = spans.size();

    std::unordered_set<std::string_view> seen;
    std::vector<std::string_view> kept;
    for (const auto& span : spans) {
        std::string_view s = text.substr(span.begin, span.end - span.begin);
        if (seen.insert(s).second) kept.push_back(s);
    }
    out.stats.unique = kept.size();

    const double repeated = static_cast<double>(out.stats.total - out.stats.unique);
    if (repeated > max_dup_rate * static_cast<double>(out.stats.total)) {
        out.dropped = true;
        doc.drop_reason = "HighRepetition";
        out.doc = std::move(doc);
        return out;
    }
    if (out.stats.unique == out.stats.total) {
        out.doc = std::move(doc);
        return out;
    }
    // Sentences that ended at a newline rather than terminal punctuation are
    // re-joined with a newline so the boundary survives a second split.
    std::string rebuilt;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i != 0) {
            const char last = kept[i - 1].back();
            rebuilt.push_back(last == '.' || last == '!' || last == '?' ? ' ' : '\n');
        }
        rebuilt += kept[i];
    }
    doc.text = std::move(rebuilt);
    out.doc = std::move(doc);
    return out;
}

}  // namespace corpusforge
