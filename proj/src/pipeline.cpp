// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "pipeline.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <unordered_map>

#include "curation.hpp"
#include "decontam.hpp"
#include "error.hpp"
#include "hash.hpp"
#include "license_filter.hpp"
#include "mixture_report.hpp"
#include "normalize.hpp"
#include "safety_quality.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace corpusforge {

const char* to_string(StageKind kind) {
    switch (kind) {
        case StageKind::LicenseFilter: return "license_filter";
        case StageKind::SafetyQuality: return "safety_quality";
        case StageKind::Dedup: return "dedup";
        case StageKind::Curation: return "curation";
        case StageKind::Decontam: return "decontam";
        case StageKind::Report: return "report";
    }
    return "?";
}

StageKind parse_stage_kind(std::string_view name) {
    for (auto k : {StageKind::LicenseFilter, StageKind::SafetyQuality, StageKind::Dedup, StageKind::Curation,
                   StageKind::Decontam, StageKind::Report}) {
        if (name == to_string(k)) return k;
    }
    throw Error(ErrorCode::Config, "unknown stage '" + std::string(name) + "'");
}

namespace {

struct StageSchema {
    std::set<std::string> keys;
    std::set<std::string> file_keys;
};

const StageSchema& schema_for(StageKind kind) {
    static const std::map<StageKind, StageSchema> schemas = {
        {StageKind::LicenseFilter, {{"name", "rules", "keep_unknown", "check_provenance"}, {"rules"}}},
        {StageKind::SafetyQuality,
         {{"name", "keywords", "wikipedia_exclusions", "hit_threshold", "base64", "base64_long_run",
           "base64_short_run", "base64_max_coverage", "header_footer", "header_footer_min_cluster",
           "header_footer_min_share", "header_footer_lines", "header_footer_passes"},
          {"keywords", "wikipedia_exclusions"}}},
        {StageKind::Dedup,
         {{"name", "stopwords", "prefix", "prefix_tokens", "sentence", "max_sentence_dup_rate"}, {"stopwords"}}},
        {StageKind::Curation,
         {{"name", "trim", "trim_window", "trim_min_docs", "trim_min_fraction", "pack", "target_tokens"}, {}}},
        {StageKind::Decontam, {{"name", "index", "min_hits", "min_coverage", "drop"}, {"index"}}},
        {StageKind::Report, {{"name", "taxonomy", "repeats"}, {"taxonomy"}}},
    };
    return schemas.at(kind);
}

// Typed access to one stage's parameters; type errors become Config errors.
class Params {
public:
    Params(const json& j, StageKind kind) : j_(j), stage_(to_string(kind)) {}

    bool flag(const char* key, bool def) const {
        if (!j_.contains(key)) return def;
        if (!j_.at(key).is_boolean()) bad(key, "a boolean");
        return j_.at(key).get<bool>();
    }
    std::size_t count(const char* key, std::size_t def, std::size_t min = 0) const {
        if (!j_.contains(key)) return def;
        if (!j_.at(key).is_number_unsigned() || j_.at(key).get<std::uint64_t>() < min) {
            bad(key, "an integer >= " + std::to_string(min));
        }
        return j_.at(key).get<std::size_t>();
    }
    double ratio(const char* key, double def) const {
        if (!j_.contains(key)) return def;
        if (!j_.at(key).is_number() || j_.at(key).get<double>() < 0.0 || j_.at(key).get<double>() > 1.0) {
            bad(key, "a number in [0, 1]");
        }
        return j_.at(key).get<double>();
    }
    std::optional<fs::path> file(const char* key) const {
        if (!j_.contains(key)) return std::nullopt;
        return fs::path(j_.at(key).get<std::string>());
    }
    const json& raw(const char* key) const { return j_.at(key); }
    bool has(const char* key) const { return j_.contains(key); }

private:
    [[noreturn]] void bad(const char* key, const std::string& what) const {
        throw Error(ErrorCode::Config, "stage " + stage_ + ": '" + key + "' must be " + what);
    }
    const json& j_;
    std::string stage_;
};

// Runtime form of each stage, loaded once per run.
struct LicenseStage {
    LicenseRules rules;
    bool check_provenance = true;
};
struct SafetyStage {
    SafetyRuleSet rules;
    bool base64 = true;
    Base64Thresholds b64;
    bool header_footer = true;
    HeaderFooterOptions hf;
};
struct DedupStage {
    StopwordSet stopwords;
    bool prefix = true;
    std::size_t prefix_tokens = kDefaultPrefixTokens;
    bool sentence = true;
    double max_dup_rate = kMaxSentenceDupRate;
};
struct CurationStage {
    bool trim = true;
    TrimOptions trim_options;
    bool pack = true;
    std::size_t target_tokens = kDefaultTargetTokens;
};
struct DecontamStage {
    IndexSet index;
    std::unique_ptr<TextFingerprinter> fingerprinter;
    ContaminationThresholds thresholds;
    bool drop = false;
};
struct ReportStage {
    MixtureTaxonomy taxonomy = MixtureTaxonomy::by_category();
    RepeatPolicy repeats;
};

struct Prepared {
    StageKind kind;
    std::string hash;
    std::unique_ptr<LicenseStage> license;
    std::unique_ptr<SafetyStage> safety;
    std::unique_ptr<DedupStage> dedup;
    std::unique_ptr<CurationStage> curation;
    std::unique_ptr<DecontamStage> decontam;
    std::unique_ptr<ReportStage> report;
};

Prepared prepare(const StageConfig& sc) {
    Params p(sc.params, sc.kind);
    Prepared out{sc.kind, sc.hash, {}, {}, {}, {}, {}, {}};
    switch (sc.kind) {
        case StageKind::LicenseFilter: {
            auto s = std::make_unique<LicenseStage>();
            auto f = p.file("rules");
            s->rules = f ? LicenseRules::from_json_text(read_file(*f)) : LicenseRules::defaults();
            s->rules.policy.keep_unknown = p.flag("keep_unknown", false);
            s->check_provenance = p.flag("check_provenance", true);
            out.license = std::move(s);
            break;
        }
        case StageKind::SafetyQuality: {
            auto s = std::make_unique<SafetyStage>();
            auto kw = p.file("keywords");
            auto wiki = p.file("wikipedia_exclusions");
            if (kw || wiki) {
                auto def = SafetyRuleSet::defaults();
                std::string kw_text;
                for (const auto& k : def.unsafe_keywords) kw_text += k + "\n";
                std::string wiki_text;
                for (const auto& w : def.wikipedia_exclusion_markers.sources()) wiki_text += w + "\n";
                s->rules = SafetyRuleSet::from_contents(kw ? read_file(*kw) : kw_text,
                                                        wiki ? read_file(*wiki) : wiki_text);
            } else {
                s->rules = SafetyRuleSet::defaults();
            }
            s->rules.hit_threshold = p.count("hit_threshold", 1, 1);
            s->base64 = p.flag("base64", true);
            s->b64.long_run = p.count("base64_long_run", s->b64.long_run, 1);
            s->b64.short_run = p.count("base64_short_run", s->b64.short_run, 1);
            s->b64.max_coverage = p.ratio("base64_max_coverage", s->b64.max_coverage);
            s->header_footer = p.flag("header_footer", true);
            s->hf.min_cluster_size = p.count("header_footer_min_cluster", s->hf.min_cluster_size, 1);
            s->hf.min_share = p.ratio("header_footer_min_share", s->hf.min_share);
            s->hf.boundary_lines = p.count("header_footer_lines", s->hf.boundary_lines);
            s->hf.max_passes = p.count("header_footer_passes", s->hf.max_passes, 1);
            out.safety = std::move(s);
            break;
        }
        case StageKind::Dedup: {
            auto s = std::make_unique<DedupStage>();
            auto f = p.file("stopwords");
            s->stopwords = f ? load_stopwords(read_file(*f)) : default_stopwords();
            s->prefix = p.flag("prefix", true);
            s->prefix_tokens = p.count("prefix_tokens", kDefaultPrefixTokens, 1);
            s->sentence = p.flag("sentence", true);
            s->max_dup_rate = p.ratio("max_sentence_dup_rate", kMaxSentenceDupRate);
            out.dedup = std::move(s);
            break;
        }
        case StageKind::Curation: {
            auto s = std::make_unique<CurationStage>();
            s->trim = p.flag("trim", true);
            s->trim_options.window = p.count("trim_window", s->trim_options.window, 1);
            s->trim_options.min_docs = p.count("trim_min_docs", s->trim_options.min_docs, 1);
            s->trim_options.min_fraction = p.ratio("trim_min_fraction", s->trim_options.min_fraction);
            s->pack = p.flag("pack", true);
            s->target_tokens = p.count("target_tokens", kDefaultTargetTokens, 1);
            out.curation = std::move(s);
            break;
        }
        case StageKind::Decontam: {
            auto s = std::make_unique<DecontamStage>();
            auto f = p.file("index");
            if (!f) throw Error(ErrorCode::Config, "stage decontam: 'index' is required");
            s->index = load_index(*f);
            s->fingerprinter = std::make_unique<TextFingerprinter>(s->index.fingerprinter());
            s->thresholds.min_hits = p.count("min_hits", 3, 1);
            s->thresholds.min_coverage = p.ratio("min_coverage", 0.001);
            if (s->thresholds.min_coverage <= 0.0) {
                throw Error(ErrorCode::Config, "stage decontam: 'min_coverage' must be positive");
            }
            s->drop = p.flag("drop", false);
            out.decontam = std::move(s);
            break;
        }
        case StageKind::Report: {
            auto s = std::make_unique<ReportStage>();
            if (auto f = p.file("taxonomy")) {
                json t;
                try {
                    t = json::parse(read_file(*f), nullptr, true, true);
                } catch (const json::exception& e) {
                    throw Error(ErrorCode::Config, f->string() + ": " + e.what());
                }
                s->taxonomy = MixtureTaxonomy::from_json(t);
            }
            if (p.has("repeats")) s->repeats = RepeatPolicy::from_json(p.raw("repeats"));
            out.report = std::move(s);
            break;
        }
    }
    return out;
}

std::vector<Prepared> prepare_all(const PipelineConfig& cfg) {
    std::vector<Prepared> out;
    for (const auto& sc : cfg.stages) out.push_back(prepare(sc));
    return out;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
    glob_t g{};
    int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<fs::path> out;
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw Error(ErrorCode::Io, "glob failed for '" + pattern + "'");
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
}

bool is_manifest(const fs::path& p) { return p.extension() == ".manifest"; }

const std::vector<std::string> kDefaultStages = {"license_filter", "safety_quality", "dedup", "curation",
                                                 "report"};

}  // namespace

PipelineConfig parse_pipeline_config(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw Error(ErrorCode::Config, "pipeline config must be a JSON object");
    static const std::set<std::string> top = {"inputs", "output_dir", "workers", "stages"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!top.count(it.key())) throw Error(ErrorCode::Config, "unknown config key '" + it.key() + "'");
    }
    PipelineConfig cfg;
    cfg.base_dir = base_dir;
    try {
        if (!j.contains("inputs")) throw Error(ErrorCode::Config, "config needs 'inputs'");
        const json& in = j.at("inputs");
        if (in.is_string()) {
            cfg.input_globs.push_back(in.get<std::string>());
        } else {
            for (const auto& g : in) cfg.input_globs.push_back(g.get<std::string>());
        }
        if (!j.contains("output_dir")) throw Error(ErrorCode::Config, "config needs 'output_dir'");
        cfg.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
        if (j.contains("workers")) {
            if (!j.at("workers").is_number_unsigned() || j.at("workers").get<std::uint64_t>() < 1) {
                throw Error(ErrorCode::Config, "'workers' must be a positive integer");
            }
            cfg.workers = j.at("workers").get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("pipeline config: ") + e.what());
    }

    std::set<fs::path> inputs;
    for (const auto& g : cfg.input_globs) {
        auto matches = expand_glob(resolve(base_dir, g).string());
        std::size_t added = 0;
        for (auto& m : matches) {
            if (is_manifest(m) || fs::is_directory(m)) continue;
            inputs.insert(m.lexically_normal());
            ++added;
        }
        if (added == 0) throw Error(ErrorCode::Config, "input pattern '" + g + "' matches no shard");
    }
    cfg.inputs.assign(inputs.begin(), inputs.end());
    std::set<fs::path> names;
    for (const auto& in : cfg.inputs) {
        if (!names.insert(in.filename()).second) {
            throw Error(ErrorCode::Config, "two inputs share the file name " + in.filename().string());
        }
        if ((cfg.output_dir / in.filename()).lexically_normal() == in) {
            throw Error(ErrorCode::Config, "output would overwrite input " + in.string());
        }
    }

    json stages = json::array();
    if (j.contains("stages")) {
        stages = j.at("stages");
        if (!stages.is_array()) throw Error(ErrorCode::Config, "'stages' must be an array");
    } else {
        for (const auto& s : kDefaultStages) stages.push_back({{"name", s}});
    }
    std::set<StageKind> seen_once;
    Fnv1a64 whole;
    json canonical = j;
    canonical.erase("workers");  // execution detail; does not change outputs
    whole.update(canonical.dump());
    for (const auto& s : stages) {
        if (s.is_string()) {
            // Shorthand: a bare stage name.
            StageConfig sc;
            sc.kind = parse_stage_kind(s.get<std::string>());
            sc.params = {{"name", s}};
            cfg.stages.push_back(std::move(sc));
        } else if (s.is_object() && s.contains("name") && s.at("name").is_string()) {
            StageConfig sc;
            sc.kind = parse_stage_kind(s.at("name").get<std::string>());
            sc.params = s;
            cfg.stages.push_back(std::move(sc));
        } else {
            throw Error(ErrorCode::Config, "each stage needs a string 'name'");
        }
    }
    for (auto& sc : cfg.stages) {
        const auto& schema = schema_for(sc.kind);
        for (auto it = sc.params.begin(); it != sc.params.end(); ++it) {
            if (!schema.keys.count(it.key())) {
                throw Error(ErrorCode::Config,
                            std::string("stage ") + to_string(sc.kind) + ": unknown key '" + it.key() + "'");
            }
        }
        if ((sc.kind == StageKind::Decontam || sc.kind == StageKind::Report) && !seen_once.insert(sc.kind).second) {
            throw Error(ErrorCode::Config, std::string("stage ") + to_string(sc.kind) + " may appear only once");
        }
        Fnv1a64 h;
        h.update(sc.params.dump());
        for (const auto& key : schema.file_keys) {
            if (!sc.params.contains(key)) continue;
            if (!sc.params.at(key).is_string()) {
                throw Error(ErrorCode::Config, std::string("stage ") + to_string(sc.kind) + ": '" + key +
                                                   "' must be a path");
            }
            fs::path path = resolve(base_dir, sc.params.at(key).get<std::string>());
            if (!fs::is_regular_file(path)) {
                throw Error(ErrorCode::Config, std::string("stage ") + to_string(sc.kind) + ": " + key +
                                                   " file not found: " + path.string());
            }
            h.update("\n" + key + "=" + hash_to_hex(fnv1a64(read_file(path))));
            sc.params[key] = path.string();
        }
        sc.hash = hash_to_hex(h.digest());
        whole.update("\n" + sc.hash);
    }
    cfg.config_hash = hash_to_hex(whole.digest());

    // Load every rule file now so bad contents fail before any processing.
    try {
        prepare_all(cfg);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Config) throw;
        throw Error(ErrorCode::Config, e.what());
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const fs::path& file) {
    std::string text;
    try {
        text = read_file(file);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.what());
    }
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, file.string() + ": " + e.what());
    }
    fs::path base = fs::absolute(file).parent_path();
    return parse_pipeline_config(j, base);
}

std::size_t effective_workers(std::size_t configured) {
    const char* env = std::getenv("CORPUSFORGE_WORKERS");
    if (env && *env) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0' || v == 0) {
            throw Error(ErrorCode::Config, "CORPUSFORGE_WORKERS must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, configured);
}

namespace {

struct StageCounts {
    std::uint64_t in = 0;
    std::uint64_t out = 0;
};

struct ShardOutcome {
    bool done = false;
    bool failed = false;
    int exit_code = kExitOk;
    std::string failed_stage;
    std::string error;
    ShardManifest manifest;
    std::vector<DropRecord> drops;
    std::vector<StageCounts> counts;
    std::optional<LeakageAccumulator> leakage;
    std::optional<MixtureSummary> mixture;
};

// Keeps docs without drop_reason; the others go to the drop log.
void split_dropped(std::vector<Document>& docs, const char* stage, std::vector<DropRecord>& drops) {
    std::vector<Document> kept;
    kept.reserve(docs.size());
    for (auto& d : docs) {
        if (d.drop_reason) {
            drops.push_back({d.id, stage, *d.drop_reason, std::nullopt});
        } else {
            kept.push_back(std::move(d));
        }
    }
    docs = std::move(kept);
}

// Restores input order after a stage that regroups documents.
void reorder_like(std::vector<Document>& docs, const std::vector<std::string>& order) {
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::sort(docs.begin(), docs.end(),
              [&](const Document& a, const Document& b) { return pos.at(a.id) < pos.at(b.id); });
}

std::vector<std::string> ids_of(const std::vector<Document>& docs) {
    std::vector<std::string> ids;
    ids.reserve(docs.size());
    for (const auto& d : docs) ids.push_back(d.id);
    return ids;
}

void run_license(const LicenseStage& st, std::vector<Document>& docs, std::vector<DropRecord>& drops) {
    for (auto& d : docs) {
        UrlClass uc = UrlClass::Unmatched;
        if (d.url) {
            try {
                uc = classify_url(*d.url, st.rules.domains);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InvalidUrl) throw;
            }
        }
        KeywordClass kc = scan_license_keywords(d.text, st.rules.keywords);
        d = assign_tier(std::move(d), uc, kc, st.rules.policy);
        if (!d.drop_reason && st.check_provenance) {
            auto v = check_provenance(d, st.rules.allowed_model_licenses);
            if (v != ProvenanceVerdict::Pass) d.drop_reason = to_string(v);
        }
    }
    split_dropped(docs, "license_filter", drops);
}

void run_safety(const SafetyStage& st, std::vector<Document>& docs, std::vector<DropRecord>& drops) {
    for (auto& d : docs) {
        auto v = safety_filter(d, st.rules);
        if (v.keep && st.base64) v = detect_base64(d.text, st.b64);
        if (!v.keep) d.drop_reason = v.reason;
    }
    split_dropped(docs, "safety_quality", drops);
    if (!st.header_footer) return;
    auto order = ids_of(docs);
    std::vector<Document> out;
    for (auto& cluster : cluster_by_base_url(std::move(docs))) {
        for (auto& d : strip_header_footer(std::move(cluster.docs), st.hf)) out.push_back(std::move(d));
    }
    reorder_like(out, order);
    docs = std::move(out);
    split_dropped(docs, "safety_quality", drops);
}

void run_dedup(const DedupStage& st, std::vector<Document>& docs, std::vector<DropRecord>& drops) {
    if (st.prefix) {
        auto order = ids_of(docs);
        std::map<std::string, std::vector<Document>> by_source;
        for (auto& d : docs) by_source[d.source].push_back(std::move(d));
        std::vector<Document> kept;
        std::vector<DropRecord> dropped;
        for (auto& [source, group] : by_source) {
            auto r = prefix_dedup(std::move(group), source, st.stopwords, st.prefix_tokens, 1);
            for (auto& d : r.kept) kept.push_back(std::move(d));
            for (auto& d : r.dropped) dropped.push_back(std::move(d));
        }
        std::unordered_map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        std::sort(dropped.begin(), dropped.end(),
                  [&](const DropRecord& a, const DropRecord& b) { return pos.at(a.doc_id) < pos.at(b.doc_id); });
        drops.insert(drops.end(), dropped.begin(), dropped.end());
        reorder_like(kept, order);
        docs = std::move(kept);
    }
    if (st.sentence) {
        for (auto& d : docs) d = sentence_dedup(std::move(d), st.max_dup_rate).doc;
        split_dropped(docs, "dedup", drops);
    }
}

json run_curation(const CurationStage& st, std::vector<Document>& docs, std::vector<DropRecord>& drops) {
    json summary = json::object();
    if (st.trim) {
        auto r = trim_boilerplate_ngrams(std::move(docs), st.trim_options);
        docs = std::move(r.docs);
        summary["prefixes_trimmed"] = r.prefixes_trimmed;
        summary["suffixes_trimmed"] = r.suffixes_trimmed;
        split_dropped(docs, "curation", drops);
    }
    if (st.pack) {
        std::unordered_map<std::string, const Document*> by_id;
        auto clusters = cluster_by_base_url(std::move(docs));
        auto examples = pack_examples(clusters, st.target_tokens);
        for (const auto& c : clusters) {
            for (const auto& d : c.docs) by_id[d.id] = &d;
        }
        std::vector<Document> out;
        out.reserve(examples.size());
        for (const auto& ex : examples) out.push_back(example_to_document(ex, *by_id.at(ex.doc_ids.front())));
        summary["examples"] = examples.size();
        summary["target_tokens"] = st.target_tokens;
        summary["mean_fill_ratio"] = mean_fill_ratio(examples, st.target_tokens);
        docs = std::move(out);
    }
    return summary;
}

json run_decontam(const DecontamStage& st, const std::string& shard_id, std::vector<Document>& docs,
                  std::vector<DropRecord>& drops, LeakageAccumulator& acc) {
    std::uint64_t flagged = 0;
    for (auto& d : docs) {
        DocScan scan = scan_doc(d, st.index.benchmarks, *st.fingerprinter, st.thresholds);
        scan.doc_id = shard_id + "/" + d.id;
        json hits = json::array();
        std::string names;
        for (const auto& r : scan.records) {
            if (!r.contaminated) continue;
            hits.push_back({{"benchmark", r.benchmark}, {"distinct_hits", r.distinct_hits}, {"coverage", r.coverage}});
            names += (names.empty() ? "" : ",") + r.benchmark;
        }
        acc.add(scan);
        if (!hits.empty()) {
            ++flagged;
            if (!d.extra.is_object()) d.extra = json::object();
            d.extra["contamination"] = hits;
            if (st.drop) d.drop_reason = "Contaminated(benchmark=" + names + ")";
        }
    }
    split_dropped(docs, "decontam", drops);
    return {{"contaminated_docs", flagged}, {"dropped", st.drop}};
}

ShardOutcome process_shard(const PipelineConfig& cfg, const std::vector<Prepared>& stages, const fs::path& input) {
    ShardOutcome out;
    std::string current = "read";
    try {
        std::string shard_id = shard_id_for(input);
        ShardContents contents = read_shard(input);
        std::vector<StageRecord> history;
        auto mpath = manifest_path_for(input);
        if (fs::exists(mpath)) {
            ShardManifest in = read_manifest(mpath);
            if (contents.errors.empty()) {
                auto problem = check_manifest(in, contents.docs);
                if (!problem.empty()) throw Error(ErrorCode::Format, input.string() + ": " + problem);
            }
            history = in.stage_history;
        }
        for (const auto& e : contents.errors) {
            out.drops.push_back({shard_id + ":" + std::to_string(e.line_no), "read",
                                 std::string(error_code_name(e.code)), std::nullopt});
        }
        std::vector<Document> docs = std::move(contents.docs);
        split_dropped(docs, "read", out.drops);

        json extra = json::object();
        extra["pipeline_config_hash"] = cfg.config_hash;
        extra["source_shard"] = input.filename().string();
        extra["malformed_lines"] = contents.errors.size();
        for (const auto& st : stages) {
            current = to_string(st.kind);
            StageRecord rec{current, st.hash, docs.size(), 0};
            switch (st.kind) {
                case StageKind::LicenseFilter: run_license(*st.license, docs, out.drops); break;
                case StageKind::SafetyQuality: run_safety(*st.safety, docs, out.drops); break;
                case StageKind::Dedup: run_dedup(*st.dedup, docs, out.drops); break;
                case StageKind::Curation: extra["curation"] = run_curation(*st.curation, docs, out.drops); break;
                case StageKind::Decontam:
                    out.leakage.emplace(st.decontam->index.benchmarks);
                    extra["decontam"] = run_decontam(*st.decontam, shard_id, docs, out.drops, *out.leakage);
                    break;
                case StageKind::Report:
                    out.mixture.emplace(st.report->taxonomy, st.report->repeats);
                    for (const auto& d : docs) out.mixture->add(d);
                    break;
            }
            rec.records_out = docs.size();
            out.counts.push_back({rec.records_in, rec.records_out});
            history.push_back(std::move(rec));
        }
        current = "write";
        out.manifest = write_shard(docs, cfg.output_dir / input.filename(), history, extra);
        out.done = true;
    } catch (const Error& e) {
        out.failed = true;
        out.failed_stage = current;
        out.error = e.what();
        out.exit_code = e.code() == ErrorCode::Io ? kExitIo : kExitStage;
    } catch (const std::exception& e) {
        out.failed = true;
        out.failed_stage = current;
        out.error = e.what();
        out.exit_code = kExitStage;
    }
    return out;
}

void copy_shard(const PipelineConfig& cfg, const fs::path& input, ShardOutcome& out) {
    try {
        fs::path target = cfg.output_dir / input.filename();
        fs::copy_file(input, target, fs::copy_options::overwrite_existing);
        auto mpath = manifest_path_for(input);
        if (fs::exists(mpath)) {
            fs::copy_file(mpath, manifest_path_for(target), fs::copy_options::overwrite_existing);
            out.manifest = read_manifest(mpath);
        } else {
            auto contents = read_shard(input);
            ShardManifest m;
            m.shard_id = shard_id_for(target);
            m.record_count = contents.docs.size();
            for (const auto& d : contents.docs) m.token_count += whitespace_token_count(d.text);
            write_manifest(m, manifest_path_for(target));
            out.manifest = m;
        }
        out.done = true;
    } catch (const std::exception& e) {
        out.failed = true;
        out.failed_stage = "copy";
        out.error = e.what();
        out.exit_code = kExitIo;
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult result;
    std::vector<Prepared> stages;
    std::size_t workers = 1;
    try {
        workers = effective_workers(cfg.workers);
        stages = prepare_all(cfg);
    } catch (const Error& e) {
        result.exit_code = kExitConfig;
        result.message = e.what();
        return result;
    }
    try {
        fs::create_directories(cfg.output_dir);
    } catch (const std::exception& e) {
        result.exit_code = kExitIo;
        result.message = e.what();
        return result;
    }

    std::vector<ShardOutcome> outcomes(cfg.inputs.size());
    std::atomic<bool> stop{false};
    std::size_t threads = std::max<std::size_t>(1, std::min(workers, cfg.inputs.size()));
    run_workers(threads, [&](std::size_t w) {
        for (std::size_t i = w; i < cfg.inputs.size(); i += threads) {
            if (stop.load()) return;
            if (stages.empty()) {
                copy_shard(cfg, cfg.inputs[i], outcomes[i]);
            } else {
                outcomes[i] = process_shard(cfg, stages, cfg.inputs[i]);
            }
            if (outcomes[i].failed) stop.store(true);
        }
    });

    std::vector<StageCounts> totals(stages.size());
    json shards = json::array();
    const ShardOutcome* failure = nullptr;
    std::optional<LeakageAccumulator> leakage;
    std::optional<MixtureSummary> mixture;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& o = outcomes[i];
        if (o.failed && !failure) failure = &o;
        if (!o.done) continue;
        result.manifests.push_back(o.manifest);
        result.drops.insert(result.drops.end(), o.drops.begin(), o.drops.end());
        for (std::size_t s = 0; s < o.counts.size(); ++s) {
            totals[s].in += o.counts[s].in;
            totals[s].out += o.counts[s].out;
        }
        if (o.leakage) {
            if (leakage) {
                leakage->merge(*o.leakage);
            } else {
                leakage = std::move(o.leakage);
            }
        }
        if (o.mixture) {
            if (mixture) {
                mixture->merge(*o.mixture);
            } else {
                mixture = std::move(o.mixture);
            }
        }
        shards.push_back({{"input", cfg.inputs[i].filename().string()},
                          {"output", (cfg.output_dir / cfg.inputs[i].filename()).filename().string()},
                          {"records_out", o.manifest.record_count}});
    }

    nlohmann::ordered_json run;
    run["config_hash"] = cfg.config_hash;
    run["status"] = failure ? "failed" : "ok";
    run["stages"] = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < stages.size(); ++s) {
        nlohmann::ordered_json st;
        st["name"] = to_string(stages[s].kind);
        st["config_hash"] = stages[s].hash;
        st["records_in"] = totals[s].in;
        st["records_out"] = totals[s].out;
        run["stages"].push_back(std::move(st));
    }
    run["shards"] = shards;
    run["dropped"] = result.drops.size();
    if (failure) {
        run["error"] = {{"stage", failure->failed_stage}, {"message", failure->error}};
        result.exit_code = failure->exit_code;
        result.message = "stage " + failure->failed_stage + ": " + failure->error;
    }

    try {
        std::string log;
        for (const auto& d : result.drops) log += serialize_drop_record(d) + "\n";
        write_file(cfg.output_dir / "drops.jsonl", log);
        if (!failure && leakage) {
            nlohmann::ordered_json report = report_to_json(leakage->report());
            report["flagged_doc_ids"] = leakage->flagged_doc_ids();
            write_file(cfg.output_dir / "contamination_report.json", report.dump(2) + "\n");
            write_file(cfg.output_dir / "contamination_report.txt", render_report_table(leakage->report()));
            std::map<std::string, std::vector<Hash64>> leaked;
            auto hashes = leakage->leaked_hashes();
            for (std::size_t b = 0; b < hashes.size(); ++b) leaked[leakage->benchmark_names()[b]] = hashes[b];
            save_leaked(leaked, cfg.output_dir / "leaked_hashes.json");
        }
        if (!failure && mixture) {
            write_file(cfg.output_dir / "mixture_report.json", summary_to_json(*mixture).dump(2) + "\n");
            write_file(cfg.output_dir / "mixture_report.txt", render_summary(*mixture));
        }
        write_file(cfg.output_dir / "run_manifest.json", run.dump(2) + "\n");
    } catch (const std::exception& e) {
        if (result.exit_code == kExitOk) {
            result.exit_code = kExitIo;
            result.message = e.what();
        }
    }
    return result;
}

PipelineResult run_pipeline_file(const fs::path& config_file) {
    try {
        return run_pipeline(load_pipeline_config(config_file));
    } catch (const Error& e) {
        PipelineResult r;
        r.exit_code = e.code() == ErrorCode::Io ? kExitIo : kExitConfig;
        r.message = e.what();
        return r;
    }
}

}  // namespace corpusforge
