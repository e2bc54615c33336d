// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"

namespace corpusforge {

/// Maps documents to report rows. A source listed in source_rows goes to
/// that row; everything else goes to the row of its category.
struct MixtureTaxonomy {
    std::vector<std::string> rows;  // display order
    std::map<std::string, std::string> source_rows;
    std::map<Category, std::string> category_rows;

    /// One row per category, named after it.
    static MixtureTaxonomy by_category();
    /// {"rows": [...], "categories": {cat: row}, "sources": {src: row}};
    /// every category must be mapped and every target must be a row.
    static MixtureTaxonomy from_json(const nlohmann::json& j);

    const std::string& row_for(const Document& doc) const;
    void validate() const;
};

/// Source -> repeat factor, in thousandths so repeated token counts stay
/// exact integers. Unlisted sources repeat once.
struct RepeatPolicy {
    std::map<std::string, std::uint64_t> milli;

    /// {"source": 1.2, ...}; factors need at most three decimals.
    static RepeatPolicy from_json(const nlohmann::json& j);
    std::uint64_t factor_milli(const std::string& source) const;
};

struct MixtureCounts {
    std::uint64_t docs = 0;
    std::uint64_t tokens = 0;
    std::uint64_t repeated_milli_tokens = 0;  // tokens x repeat x 1000

    MixtureCounts& operator+=(const MixtureCounts& o) {
        docs += o.docs;
        tokens += o.tokens;
        repeated_milli_tokens += o.repeated_milli_tokens;
        return *this;
    }
    bool operator==(const MixtureCounts&) const = default;
};

struct MixtureKey {
    std::string row;
    LicenseTier tier = LicenseTier::Unknown;
    SyntheticStatus status = SyntheticStatus::NonSynthetic;

    auto operator<=>(const MixtureKey&) const = default;
};

enum class MixtureDimension { Row, Tier, Status };

struct MixtureRow {
    std::string label;
    MixtureCounts counts;
};

/// Exact document and whitespace-token counts per (row, tier, synthetic
/// status). Merging is integer addition, so any shard partition summed
/// gives the same summary.
class MixtureSummary {
public:
    explicit MixtureSummary(MixtureTaxonomy taxonomy = MixtureTaxonomy::by_category(),
                            RepeatPolicy repeats = {});

    void add(const Document& doc);
    /// Throws Error(TaxonomyMismatch) when the row sets differ.
    void merge(const MixtureSummary& other);

    const std::map<MixtureKey, MixtureCounts>& cells() const noexcept { return cells_; }
    const MixtureTaxonomy& taxonomy() const noexcept { return taxonomy_; }
    MixtureCounts totals() const;

    /// Rows in taxonomy (or enum) order, zero rows included.
    std::vector<MixtureRow> rows(MixtureDimension dim = MixtureDimension::Row) const;
    /// Token share of a cell; 0 for an empty summary.
    double fraction(const MixtureKey& key) const;

    bool operator==(const MixtureSummary& o) const { return cells_ == o.cells_; }

private:
    MixtureTaxonomy taxonomy_;
    RepeatPolicy repeats_;
    std::map<MixtureKey, MixtureCounts> cells_;
};

MixtureSummary summarize(std::span<const Document> docs, const MixtureTaxonomy& taxonomy = MixtureTaxonomy::by_category(),
                         const RepeatPolicy& repeats = {});
/// Reads every shard; throws Error(MalformedRecord) on the first bad line
/// and Error(Format) when a shard disagrees with its manifest.
MixtureSummary summarize_shards(const std::vector<std::filesystem::path>& shards,
                                const MixtureTaxonomy& taxonomy = MixtureTaxonomy::by_category(),
                                const RepeatPolicy& repeats = {}, std::size_t workers = 1);

/// "42.3%": percentage with one decimal.
std::string render_percent(double fraction);
/// "9.314B" at or above one billion, otherwise "12,345".
std::string render_token_count(std::uint64_t tokens);
/// "1", "1.2", "13.8".
std::string render_repeat(std::uint64_t milli);

/// Aligned text table: source, share of training with the repeat factor in
/// parentheses, unique token count, plus a total line. Shares use the given
/// totals, which need not equal the row sums.
std::string render_mixture_table(std::span<const MixtureRow> rows, std::uint64_t total_tokens,
                                 std::uint64_t total_repeated_milli_tokens);
std::string render_summary(const MixtureSummary& s, MixtureDimension dim = MixtureDimension::Row);
nlohmann::ordered_json summary_to_json(const MixtureSummary& s);

struct ComparisonRow {
    std::string label;
    double share_a = 0, share_b = 0, share_delta = 0;  // delta = b - a
    std::uint64_t tokens_a = 0, tokens_b = 0;
    std::int64_t token_delta = 0;
};

/// Row-aligned comparison; throws Error(TaxonomyMismatch) when the two
/// summaries do not have the same rows.
std::vector<ComparisonRow> compare(const MixtureSummary& a, const MixtureSummary& b);
std::string render_comparison(std::span<const ComparisonRow> rows, const std::string& name_a,
                              const std::string& name_b);

}  // namespace corpusforge
