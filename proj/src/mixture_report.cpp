// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "mixture_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "error.hpp"
#include "util.hpp"

namespace corpusforge {

MixtureTaxonomy MixtureTaxonomy::by_category() {
    MixtureTaxonomy t;
    for (auto c : kAllCategories) {
        t.rows.push_back(to_string(c));
        t.category_rows[c] = to_string(c);
    }
    return t;
}

MixtureTaxonomy MixtureTaxonomy::from_json(const nlohmann::json& j) {
    MixtureTaxonomy t;
    try {
        for (const auto& r : j.at("rows")) t.rows.push_back(r.get<std::string>());
        for (auto it = j.at("categories").begin(); it != j.at("categories").end(); ++it) {
            t.category_rows[parse_category(it.key())] = it.value().get<std::string>();
        }
        if (j.contains("sources")) {
            for (auto it = j.at("sources").begin(); it != j.at("sources").end(); ++it) {
                t.source_rows[it.key()] = it.value().get<std::string>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("taxonomy: ") + e.what());
    }
    t.validate();
    return t;
}

void MixtureTaxonomy::validate() const {
    std::set<std::string> known(rows.begin(), rows.end());
    if (known.size() != rows.size()) throw Error(ErrorCode::Config, "taxonomy rows must be unique");
    for (auto c : kAllCategories) {
        auto it = category_rows.find(c);
        if (it == category_rows.end()) {
            throw Error(ErrorCode::Config, std::string("taxonomy does not map category ") + to_string(c));
        }
        if (!known.count(it->second)) throw Error(ErrorCode::Config, "taxonomy row '" + it->second + "' not listed");
    }
    for (const auto& [src, row] : source_rows) {
        if (!known.count(row)) throw Error(ErrorCode::Config, "taxonomy row '" + row + "' not listed");
    }
}

const std::string& MixtureTaxonomy::row_for(const Document& doc) const {
    auto s = source_rows.find(doc.source);
    if (s != source_rows.end()) return s->second;
    return category_rows.at(doc.category);
}

RepeatPolicy RepeatPolicy::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Config, "repeats must be an object of source -> factor");
    RepeatPolicy p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number() || it.value().get<double>() < 0) {
            throw Error(ErrorCode::Config, "repeat factor for '" + it.key() + "' must be a non-negative number");
        }
        double f = it.value().get<double>() * 1000.0;
        double r = std::round(f);
        if (std::abs(f - r) > 1e-6) {
            throw Error(ErrorCode::Config, "repeat factor for '" + it.key() + "' has more than three decimals");
        }
        p.milli[it.key()] = static_cast<std::uint64_t>(r);
    }
    return p;
}

std::uint64_t RepeatPolicy::factor_milli(const std::string& source) const {
    auto it = milli.find(source);
    return it == milli.end() ? 1000 : it->second;
}

MixtureSummary::MixtureSummary(MixtureTaxonomy taxonomy, RepeatPolicy repeats)
    : taxonomy_(std::move(taxonomy)), repeats_(std::move(repeats)) {
    taxonomy_.validate();
}

void MixtureSummary::add(const Document& doc) {
    MixtureKey key{taxonomy_.row_for(doc), doc.license_tier, doc.synthetic_status};
    MixtureCounts c;
    c.docs = 1;
    c.tokens = whitespace_token_count(doc.text);
    c.repeated_milli_tokens = c.tokens * repeats_.factor_milli(doc.source);
    cells_[key] += c;
}

void MixtureSummary::merge(const MixtureSummary& other) {
    if (std::set<std::string>(taxonomy_.rows.begin(), taxonomy_.rows.end()) !=
        std::set<std::string>(other.taxonomy_.rows.begin(), other.taxonomy_.rows.end())) {
        throw Error(ErrorCode::TaxonomyMismatch, "cannot merge summaries with different rows");
    }
    for (const auto& [k, c] : other.cells_) cells_[k] += c;
}

MixtureCounts MixtureSummary::totals() const {
    MixtureCounts t;
    for (const auto& [k, c] : cells_) t += c;
    return t;
}

std::vector<MixtureRow> MixtureSummary::rows(MixtureDimension dim) const {
    std::vector<MixtureRow> out;
    auto find = [&](const std::string& label) -> MixtureRow& {
        for (auto& r : out) {
            if (r.label == label) return r;
        }
        out.push_back({label, {}});
        return out.back();
    };
    switch (dim) {
        case MixtureDimension::Row:
            for (const auto& r : taxonomy_.rows) find(r);
            break;
        case MixtureDimension::Tier:
            for (auto t : kAllTiers) find(to_string(t));
            break;
        case MixtureDimension::Status:
            for (auto s : kAllStatuses) find(to_string(s));
            break;
    }
    for (const auto& [k, c] : cells_) {
        switch (dim) {
            case MixtureDimension::Row: find(k.row).counts += c; break;
            case MixtureDimension::Tier: find(to_string(k.tier)).counts += c; break;
            case MixtureDimension::Status: find(to_string(k.status)).counts += c; break;
        }
    }
    return out;
}

double MixtureSummary::fraction(const MixtureKey& key) const {
    auto total = totals().tokens;
    auto it = cells_.find(key);
    if (total == 0 || it == cells_.end()) return 0.0;
    return static_cast<double>(it->second.tokens) / static_cast<double>(total);
}

MixtureSummary summarize(std::span<const Document> docs, const MixtureTaxonomy& taxonomy,
                         const RepeatPolicy& repeats) {
    MixtureSummary s(taxonomy, repeats);
    for (const auto& d : docs) s.add(d);
    return s;
}

MixtureSummary summarize_shards(const std::vector<std::filesystem::path>& shards,
                                const MixtureTaxonomy& taxonomy, const RepeatPolicy& repeats,
                                std::size_t workers) {
    workers = std::max<std::size_t>(1, std::min(workers, shards.size()));
    std::vector<MixtureSummary> partials(workers, MixtureSummary(taxonomy, repeats));
    run_workers(workers, [&](std::size_t w) {
        for (std::size_t i = w; i < shards.size(); i += workers) {
            auto contents = read_shard(shards[i]);
            if (!contents.errors.empty()) {
                const auto& e = contents.errors.front();
                throw Error(ErrorCode::MalformedRecord, shards[i].string() + ":" + std::to_string(e.line_no) +
                                                            ": " + e.message);
            }
            auto mpath = manifest_path_for(shards[i]);
            if (std::filesystem::exists(mpath)) {
                auto problem = check_manifest(read_manifest(mpath), contents.docs);
                if (!problem.empty()) throw Error(ErrorCode::Format, shards[i].string() + ": " + problem);
            }
            for (const auto& d : contents.docs) partials[w].add(d);
        }
    });
    for (std::size_t w = 1; w < partials.size(); ++w) partials[0].merge(partials[w]);
    return partials.empty() ? MixtureSummary(taxonomy, repeats) : std::move(partials[0]);
}

std::string render_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
    return buf;
}

std::string render_token_count(std::uint64_t tokens) {
    if (tokens >= 1'000'000'000ULL) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%llu.%03lluB", static_cast<unsigned long long>(tokens / 1'000'000'000ULL),
                      static_cast<unsigned long long>((tokens % 1'000'000'000ULL) / 1'000'000ULL));
        return buf;
    }
    return with_thousands(tokens);
}

std::string render_repeat(std::uint64_t milli) {
    std::string s = std::to_string(milli / 1000);
    std::uint64_t frac = milli % 1000;
    if (frac) {
        char buf[8];
        std::snprintf(buf, sizeof buf, ".%03llu", static_cast<unsigned long long>(frac));
        std::string f = buf;
        while (f.back() == '0') f.pop_back();
        s += f;
    }
    return s;
}

namespace {

std::string render_aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i == 0) {
                line += r[i] + std::string(width[i] - r[i].size(), ' ');
            } else {
                line += "  " + std::string(width[i] - r[i].size(), ' ') + r[i];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
    return os.str();
}

double ratio(std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}

}  // namespace

std::string render_mixture_table(std::span<const MixtureRow> rows, std::uint64_t total_tokens,
                                 std::uint64_t total_repeated_milli_tokens) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"Data Source", "Fraction of Training (with Repeats)", "Unique Token Count"});
    for (const auto& r : rows) {
        std::string repeat = r.counts.tokens == 0
                                 ? "-"
                                 : render_repeat(r.counts.repeated_milli_tokens / r.counts.tokens);
        cells.push_back({r.label,
                         render_percent(ratio(r.counts.repeated_milli_tokens, total_repeated_milli_tokens)) +
                             " (" + repeat + ")",
                         render_token_count(r.counts.tokens)});
    }
    cells.push_back({"Total", render_percent(total_repeated_milli_tokens == 0 ? 0.0 : 1.0),
                     render_token_count(total_tokens)});
    return render_aligned(cells);
}

std::string render_summary(const MixtureSummary& s, MixtureDimension dim) {
    auto rows = s.rows(dim);
    auto t = s.totals();
    return render_mixture_table(rows, t.tokens, t.repeated_milli_tokens);
}

nlohmann::ordered_json summary_to_json(const MixtureSummary& s) {
    nlohmann::ordered_json j;
    auto t = s.totals();
    j["token_count_kind"] = "whitespace_proxy";
    j["total_docs"] = t.docs;
    j["total_tokens"] = t.tokens;
    j["total_repeated_milli_tokens"] = t.repeated_milli_tokens;
    auto rows_json = [&](MixtureDimension dim) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : s.rows(dim)) {
            nlohmann::ordered_json o;
            o["label"] = r.label;
            o["docs"] = r.counts.docs;
            o["tokens"] = r.counts.tokens;
            o["fraction"] = ratio(r.counts.tokens, t.tokens);
            o["fraction_with_repeats"] = ratio(r.counts.repeated_milli_tokens, t.repeated_milli_tokens);
            arr.push_back(std::move(o));
        }
        return arr;
    };
    j["rows"] = rows_json(MixtureDimension::Row);
    j["tiers"] = rows_json(MixtureDimension::Tier);
    j["synthetic_status"] = rows_json(MixtureDimension::Status);
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& [k, c] : s.cells()) {
        nlohmann::ordered_json o;
        o["row"] = k.row;
        o["license_tier"] = to_string(k.tier);
        o["synthetic_status"] = to_string(k.status);
        o["docs"] = c.docs;
        o["tokens"] = c.tokens;
        o["fraction"] = ratio(c.tokens, t.tokens);
        j["cells"].push_back(std::move(o));
    }
    return j;
}

std::vector<ComparisonRow> compare(const MixtureSummary& a, const MixtureSummary& b) {
    const auto& ra = a.taxonomy().rows;
    const auto& rb = b.taxonomy().rows;
    if (std::set<std::string>(ra.begin(), ra.end()) != std::set<std::string>(rb.begin(), rb.end())) {
        throw Error(ErrorCode::TaxonomyMismatch, "summaries use different row taxonomies");
    }
    auto rows_a = a.rows();
    auto rows_b = b.rows();
    auto ta = a.totals(), tb = b.totals();
    std::vector<ComparisonRow> out;
    for (const auto& x : rows_a) {
        auto y = std::find_if(rows_b.begin(), rows_b.end(), [&](const MixtureRow& r) { return r.label == x.label; });
        ComparisonRow c;
        c.label = x.label;
        c.share_a = ratio(x.counts.repeated_milli_tokens, ta.repeated_milli_tokens);
        c.share_b = ratio(y->counts.repeated_milli_tokens, tb.repeated_milli_tokens);
        c.share_delta = c.share_b - c.share_a;
        c.tokens_a = x.counts.tokens;
        c.tokens_b = y->counts.tokens;
        c.token_delta = static_cast<std::int64_t>(c.tokens_b) - static_cast<std::int64_t>(c.tokens_a);
        out.push_back(std::move(c));
    }
    return out;
}

std::string render_comparison(std::span<const ComparisonRow> rows, const std::string& name_a,
                              const std::string& name_b) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"Data Source", name_a, name_b, "Delta", name_a + " Tokens", name_b + " Tokens"});
    for (const auto& r : rows) {
        char delta[32];
        std::snprintf(delta, sizeof delta, "%+.1f pp", r.share_delta * 100.0);
        cells.push_back({r.label, render_percent(r.share_a), render_percent(r.share_b), delta,
                         render_token_count(r.tokens_a), render_token_count(r.tokens_b)});
    }
    return render_aligned(cells);
}

}  // namespace corpusforge
