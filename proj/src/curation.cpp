// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "curation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "license_filter.hpp"
#include "normalize.hpp"
#include "util.hpp"

namespace corpusforge {

namespace {

/// [begin, end) byte offsets of each whitespace-delimited token.
std::vector<TextSpan> token_spans(std::string_view text) {
    std::vector<TextSpan> spans;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ascii_space(text[i])) ++i;
        if (i == text.size()) break;
        const std::size_t b = i;
        while (i < text.size() && !is_ascii_space(text[i])) ++i;
        spans.push_back({b, i});
    }
    return spans;
}

std::string window_key(std::string_view text, const std::vector<TextSpan>& spans,
                       std::size_t first, std::size_t count) {
    std::string key;
    for (std::size_t k = 0; k < count; ++k) {
        if (k != 0) key.push_back(' ');
        const auto& s = spans[first + k];
        key.append(text.substr(s.begin, s.end - s.begin));
    }
    return key;
}

}  // namespace

TrimResult trim_boilerplate_ngrams(std::vector<Document> docs, const TrimOptions& options) {
    TrimResult out;
    const std::size_t w = options.window;
    if (w == 0) {
        out.docs = std::move(docs);
        return out;
    }
    std::vector<std::vector<TextSpan>> spans;
    spans.reserve(docs.size());
    std::unordered_map<std::string, std::size_t> prefix_counts;
    std::unordered_map<std::string, std::size_t> suffix_counts;
    for (const auto& d : docs) {
        spans.push_back(token_spans(d.text));
        const auto& s = spans.back();
        if (s.size() < w) continue;
        ++prefix_counts[window_key(d.text, s, 0, w)];
        ++suffix_counts[window_key(d.text, s, s.size() - w, w)];
    }
    const auto fraction_floor = static_cast<std::size_t>(
        std::ceil(options.min_fraction * static_cast<double>(docs.size()) - 1e-9));
    const std::size_t threshold = std::max(options.min_docs, fraction_floor);

    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto& d = docs[i];
        const auto& s = spans[i];
        const std::size_t t = s.size();
        if (t < w) continue;
        const bool strip_prefix = prefix_counts[window_key(d.text, s, 0, w)] >= threshold;
        bool strip_suffix = suffix_counts[window_key(d.text, s, t - w, w)] >= threshold;
        // The two windows may not overlap.
        if (strip_prefix && strip_suffix && t < 2 * w) strip_suffix = false;
        if (!strip_prefix && !strip_suffix) continue;

        const std::size_t first = strip_prefix ? w : 0;
        const std::size_t last = strip_suffix ? t - w : t;  // exclusive token index
        std::string trimmed;
        if (first < last) {
            trimmed = d.text.substr(s[first].begin, s[last - 1].end - s[first].begin);
        }
        if (strip_prefix) ++out.prefixes_trimmed;
        if (strip_suffix) ++out.suffixes_trimmed;
        d.text = std::move(trimmed);
        if (d.text.empty()) d.drop_reason = "EmptyAfterBoilerplateTrim";
    }
    out.docs = std::move(docs);
    return out;
}

std::string base_url_key(const Document& doc) {
    if (doc.url && !trim(*doc.url).empty()) {
        try {
            std::string host = parse_url(*doc.url).host;
            if (host.starts_with("www.") && host.size() > 4) host.erase(0, 4);
            return host;
        } catch (const Error&) {
        }
    }
    return doc.source;
}

std::vector<std::string> DomainCluster::doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(docs.size());
    for (const auto& d : docs) ids.push_back(d.id);
    return ids;
}

std::vector<DomainCluster> cluster_by_base_url(std::vector<Document> docs) {
    std::map<std::string, std::vector<Document>> groups;
    for (auto& d : docs) {
        std::string key = base_url_key(d);
        groups[std::move(key)].push_back(std::move(d));
    }
    std::vector<DomainCluster> out;
    out.reserve(groups.size());
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const Document& a, const Document& b) { return a.id < b.id; });
        out.push_back({key, std::move(members)});
    }
    return out;
}

std::vector<std::string> split_for_packing(std::string_view text, std::size_t target_tokens) {
    if (target_tokens < 1) throw Error(ErrorCode::InvalidTarget, "target_tokens must be >= 1");
    if (whitespace_token_count(text) <= target_tokens) return {std::string(text)};

    // Cut candidates are byte offsets at which a token starts; a unit runs
    // from one candidate to the next.
    struct Unit {
        std::size_t begin;
        std::size_t tokens;
    };
    std::vector<Unit> units;
    const auto sentences = sentence_spans(text);
    const auto tokens = token_spans(text);
    std::size_t tok = 0;
    for (std::size_t k = 0; k < sentences.size(); ++k) {
        const std::size_t unit_begin = k == 0 ? 0 : sentences[k].begin;
        const std::size_t unit_end = k + 1 < sentences.size() ? sentences[k + 1].begin : text.size();
        const std::size_t first_tok = tok;
        while (tok < tokens.size() && tokens[tok].begin < unit_end) ++tok;
        const std::size_t n = tok - first_tok;
        if (n <= target_tokens) {
            units.push_back({unit_begin, n});
            continue;
        }
        // Over-long sentence: hard cuts every target_tokens tokens.
        for (std::size_t j = 0; j < n; j += target_tokens) {
            const std::size_t b = j == 0 ? unit_begin : tokens[first_tok + j].begin;
            units.push_back({b, std::min(target_tokens, n - j)});
        }
    }

    std::vector<std::string> segments;
    std::size_t seg_begin = 0;
    std::size_t seg_tokens = 0;
    for (const auto& u : units) {
        if (seg_tokens > 0 && seg_tokens + u.tokens > target_tokens) {
            segments.emplace_back(text.substr(seg_begin, u.begin - seg_begin));
            seg_begin = u.begin;
            seg_tokens = 0;
        }
        seg_tokens += u.tokens;
    }
    segments.emplace_back(text.substr(seg_begin));
    return segments;
}

std::vector<TrainingExample> pack_examples(std::span<const DomainCluster> clusters,
                                           std::size_t target_tokens) {
    if (target_tokens < 1) throw Error(ErrorCode::InvalidTarget, "target_tokens must be >= 1");
    std::vector<TrainingExample> out;
    for (const auto& cluster : clusters) {
        std::vector<const Document*> ordered;
        ordered.reserve(cluster.docs.size());
        for (const auto& d : cluster.docs) ordered.push_back(&d);
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const Document* a, const Document* b) { return a->id < b->id; });

        struct Bin {
            TrainingExample example;
            std::size_t used = 0;
        };
        std::vector<Bin> bins;
        for (const Document* doc : ordered) {
            const auto segments = split_for_packing(doc->text, target_tokens);
            for (std::size_t si = 0; si < segments.size(); ++si) {
                const std::size_t tokens = whitespace_token_count(segments[si]);
                auto bin = std::find_if(bins.begin(), bins.end(), [&](const Bin& b) {
                    return b.used + tokens <= target_tokens;
                });
                if (bin == bins.end()) {
                    bins.emplace_back();
                    bin = std::prev(bins.end());
                }
                auto& ex = bin->example;
                if (!ex.pieces.empty()) ex.text += kPieceSeparator;
                ex.text += segments[si];
                ex.pieces.push_back({doc->id, si, segments.size(), tokens});
                if (ex.doc_ids.empty() || ex.doc_ids.back() != doc->id) {
                    ex.doc_ids.push_back(doc->id);
                }
                bin->used += tokens;
                ex.token_count = bin->used;
            }
        }
        for (std::size_t i = 0; i < bins.size(); ++i) {
            auto& ex = bins[i].example;
            ex.example_id = cluster.key + "#" + std::to_string(i);
            ex.cluster_key = cluster.key;
            out.push_back(std::move(ex));
        }
    }
    return out;
}

double mean_fill_ratio(std::span<const TrainingExample> examples, std::size_t target_tokens) {
    if (examples.empty() || target_tokens == 0) return 0.0;
    double sum = 0.0;
    for (const auto& e : examples) {
        sum += static_cast<double>(e.token_count) / static_cast<double>(target_tokens);
    }
    return sum / static_cast<double>(examples.size());
}

Document example_to_document(const TrainingExample& example, const Document& first_member) {
    Document d;
    d.id = example.example_id;
    d.text = example.text;
    d.source = first_member.source;
    d.license_tier = first_member.license_tier;
    d.category = first_member.category;
    d.synthetic_status = first_member.synthetic_status;
    d.generator_provenance = first_member.generator_provenance;
    d.extra["cluster_key"] = example.cluster_key;
    d.extra["doc_ids"] = example.doc_ids;
    d.extra["token_count"] = example.token_count;
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& p : example.pieces) {
        pieces.push_back({{"doc_id", p.doc_id},
                          {"segment_index", p.segment_index},
                          {"segment_count", p.segment_count},
                          {"token_count", p.token_count}});
    }
    d.extra["pieces"] = std::move(pieces);
    return d;
}

}  // namespace corpusforge
