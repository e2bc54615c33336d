// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "normalize.hpp"

namespace corpusforge {

/// Outcome of a per-document filter. `reason` is empty when kept.
struct FilterVerdict {
    bool keep = true;
    std::string reason;
};

struct SafetyRuleSet {
    /// Single normalized tokens; rule id = position + 1.
    std::vector<std::string> unsafe_keywords;
    /// Case-insensitive patterns over title/category metadata.
    PatternSet wikipedia_exclusion_markers;
    /// A document is Wikipedia-sourced when its source contains one of these
    /// (case-insensitive) or its URL host ends in "wikipedia.org".
    std::vector<std::string> wikipedia_source_markers = {"wikipedia", "wiki40b", "enwiki"};
    std::size_t hit_threshold = 1;

    /// Throws Error(Config) for multi-token or non-lowercase keywords.
    static SafetyRuleSet from_contents(std::string_view keywords_file,
                                       std::string_view wikipedia_patterns_file);
    static SafetyRuleSet defaults();

    int keyword_rule_id(std::string_view token) const;

private:
    std::unordered_map<std::string, int> keyword_ids_;
};

bool is_wikipedia_document(const Document& doc, const SafetyRuleSet& rules);

/// Reasons are "UnsafeKeyword(rule=<id>)" or "WikipediaExclusion(rule=<id>)";
/// the matched term itself is never reported.
FilterVerdict safety_filter(const Document& doc, const SafetyRuleSet& rules);

struct Base64Thresholds {
    std::size_t long_run = 256;
    std::size_t short_run = 64;
    double max_coverage = 0.20;
};

/// keep=false (reason "Base64") when the text contains base64-looking runs.
FilterVerdict detect_base64(std::string_view text, const Base64Thresholds& t = {});

struct HeaderFooterOptions {
    std::size_t min_cluster_size = 10;
    double min_share = 0.5;
    std::size_t boundary_lines = 3;
    std::size_t max_passes = 3;
};

/// Removes leading/trailing lines shared verbatim, at the same position, by
/// at least min_share of the cluster. Clusters smaller than
/// min_cluster_size come back unchanged.
std::vector<Document> strip_header_footer(std::vector<Document> cluster,
                                          const HeaderFooterOptions& options = {});

}  // namespace corpusforge
