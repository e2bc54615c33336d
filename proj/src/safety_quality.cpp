// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "safety_quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "embedded_data.hpp"
#include "license_filter.hpp"
#include "util.hpp"

namespace corpusforge {

SafetyRuleSet SafetyRuleSet::from_contents(std::string_view keywords_file,
                                           std::string_view wikipedia_patterns_file) {
    SafetyRuleSet rules;
    const StopwordSet none;
    for (const auto& line : parse_line_list(keywords_file)) {
        auto tokens = normalize_text(line, none).tokens;
        if (tokens.size() != 1 || tokens.front() != line) {
            throw Error(ErrorCode::Config, "safety keyword on entry " +
                                               std::to_string(rules.unsafe_keywords.size() + 1) +
                                               " must be a single lowercase token");
        }
        rules.unsafe_keywords.push_back(line);
        rules.keyword_ids_.emplace(line, static_cast<int>(rules.unsafe_keywords.size()));
    }
    rules.wikipedia_exclusion_markers =
        PatternSet::from_file_contents(wikipedia_patterns_file, /*case_insensitive=*/true);
    return rules;
}

SafetyRuleSet SafetyRuleSet::defaults() {
    return from_contents(embedded::safety_keywords(), embedded::wikipedia_exclusions());
}

int SafetyRuleSet::keyword_rule_id(std::string_view token) const {
    auto it = keyword_ids_.find(std::string(token));
    return it == keyword_ids_.end() ? 0 : it->second;
}

bool is_wikipedia_document(const Document& doc, const SafetyRuleSet& rules) {
    const std::string source = ascii_lower(doc.source);
    for (const auto& m : rules.wikipedia_source_markers) {
        if (source.find(m) != std::string::npos) return true;
    }
    if (doc.url) {
        try {
            const std::string host = parse_url(*doc.url).host;
            if (host == "wikipedia.org" || host.ends_with(".wikipedia.org")) return true;
        } catch (const Error&) {
        }
    }
    return false;
}

namespace {

std::vector<std::string> metadata_strings(const Document& doc) {
    std::vector<std::string> out;
    for (const char* key : {"title", "categories"}) {
        auto it = doc.extra.find(key);
        if (it == doc.extra.end()) continue;
        if (it->is_string()) {
            out.push_back(it->get<std::string>());
        } else if (it->is_array()) {
            for (const auto& v : *it) {
                if (v.is_string()) out.push_back(v.get<std::string>());
            }
        }
    }
    return out;
}

bool is_base64_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '+' || c == '/';
}

std::size_t count_code_points(std::string_view text) {
    std::size_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace

FilterVerdict safety_filter(const Document& doc, const SafetyRuleSet& rules) {
    if (!rules.unsafe_keywords.empty()) {
        const StopwordSet none;
        std::size_t hits = 0;
        int first_rule = 0;
        for (const auto& tok : normalize_text(doc.text, none).tokens) {
            if (int id = rules.keyword_rule_id(tok); id != 0) {
                if (first_rule == 0) first_rule = id;
                if (++hits >= rules.hit_threshold) {
                    return {false, "UnsafeKeyword(rule=" + std::to_string(first_rule) + ")"};
                }
            }
        }
    }
    if (!rules.wikipedia_exclusion_markers.empty() && is_wikipedia_document(doc, rules)) {
        for (const auto& s : metadata_strings(doc)) {
            if (int idx = rules.wikipedia_exclusion_markers.first_match(s); idx >= 0) {
                return {false, "WikipediaExclusion(rule=" + std::to_string(idx + 1) + ")"};
            }
        }
    }
    return {};
}

FilterVerdict detect_base64(std::string_view text, const Base64Thresholds& t) {
    std::size_t covered = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_base64_char(text[i])) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        bool letters = false;
        bool digits = false;
        while (i < text.size() && is_base64_char(text[i])) {
            const char c = text[i];
            if (c >= '0' && c <= '9') {
                digits = true;
            } else if (c != '+' && c != '/') {
                letters = true;
            }
            ++i;
        }
        for (int pad = 0; pad < 2 && i < text.size() && text[i] == '='; ++pad) ++i;
        const std::size_t len = i - start;
        if (!(letters && digits)) continue;
        if (len >= t.long_run) return {false, "Base64"};
        if (len >= t.short_run) covered += len;
    }
    const std::size_t chars = count_code_points(text);
    if (chars > 0 && static_cast<double>(covered) > t.max_coverage * static_cast<double>(chars)) {
        return {false, "Base64"};
    }
    return {};
}

namespace {

struct SplitText {
    std::vector<std::string> lines;
    bool trailing_newline = false;
};

SplitText split_lines(const std::string& text) {
    SplitText out;
    std::string_view s = text;
    if (!s.empty() && s.back() == '\n') {
        out.trailing_newline = true;
        s.remove_suffix(1);
    }
    std::size_t pos = 0;
    while (true) {
        std::size_t nl = s.find('\n', pos);
        if (nl == std::string_view::npos) {
            out.lines.emplace_back(s.substr(pos));
            break;
        }
        out.lines.emplace_back(s.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return out;
}

std::string join_lines(const SplitText& t) {
    std::string out;
    for (std::size_t i = 0; i < t.lines.size(); ++i) {
        if (i != 0) out.push_back('\n');
        out += t.lines[i];
    }
    if (t.trailing_newline && !out.empty()) out.push_back('\n');
    return out;
}

// (from_end, position, line)
using BoundaryKey = std::tuple<bool, std::size_t, std::string>;

}  // namespace

std::vector<Document> strip_header_footer(std::vector<Document> cluster,
                                          const HeaderFooterOptions& options) {
    const std::size_t n = cluster.size();
    if (n < options.min_cluster_size || n == 0) return cluster;
    const auto required = static_cast<std::size_t>(
        std::ceil(options.min_share * static_cast<double>(n) - 1e-9));

    std::vector<SplitText> split;
    split.reserve(n);
    for (const auto& d : cluster) split.push_back(split_lines(d.text));

    for (std::size_t pass = 0; pass < options.max_passes; ++pass) {
        std::map<BoundaryKey, std::size_t> counts;
        for (const auto& t : split) {
            const std::size_t m = t.lines.size();
            for (std::size_t p = 0; p < std::min(options.boundary_lines, m); ++p) {
                if (!trim(t.lines[p]).empty()) ++counts[{false, p, t.lines[p]}];
                if (!trim(t.lines[m - 1 - p]).empty()) ++counts[{true, p, t.lines[m - 1 - p]}];
            }
        }
        std::set<BoundaryKey> frequent;
        for (const auto& [key, count] : counts) {
            if (count >= required) frequent.insert(key);
        }
        if (frequent.empty()) break;

        bool changed = false;
        for (auto& t : split) {
            const std::size_t m = t.lines.size();
            std::vector<bool> remove(m, false);
            for (std::size_t p = 0; p < std::min(options.boundary_lines, m); ++p) {
                if (frequent.count({false, p, t.lines[p]}) != 0) remove[p] = true;
                if (frequent.count({true, p, t.lines[m - 1 - p]}) != 0) remove[m - 1 - p] = true;
            }
            if (std::none_of(remove.begin(), remove.end(), [](bool b) { return b; })) continue;
            std::vector<std::string> kept;
            for (std::size_t i = 0; i < m; ++i) {
                if (!remove[i]) kept.push_back(std::move(t.lines[i]));
            }
            t.lines = std::move(kept);
            changed = true;
        }
        if (!changed) break;
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::string text = join_lines(split[i]);
        if (text != cluster[i].text) {
            cluster[i].text = std::move(text);
            if (cluster[i].text.empty()) cluster[i].drop_reason = "EmptyAfterHeaderFooterStrip";
        }
    }
    return cluster;
}

}  // namespace corpusforge
