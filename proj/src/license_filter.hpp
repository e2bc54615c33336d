// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace corpusforge {

enum class UrlClass { Governmental, PermissiveDomain, Blocked, Unmatched };
enum class KeywordClass { Permissive, Restrictive, None };

const char* to_string(UrlClass c);
const char* to_string(KeywordClass c);

struct DomainRuleSet {
    std::vector<std::string> gov_patterns;
    std::vector<std::string> permissive_domains;
    std::vector<std::string> blocklist;

    /// Throws Error(Config) on an empty, non-lowercase or unsupported pattern.
    void validate() const;
};

struct LicenseKeywordSet {
    std::vector<std::string> permissive_keywords;
    std::vector<std::string> restrictive_keywords;

    /// Throws Error(Config) unless both lists are lowercase and disjoint.
    void validate() const;
};

struct TierPolicy {
    std::map<std::string, LicenseTier> source_tiers;
    /// Audit mode: keep documents no rule could tier.
    bool keep_unknown = false;
};

/// Everything the license stage reads from its rules file.
struct LicenseRules {
    DomainRuleSet domains;
    LicenseKeywordSet keywords;
    TierPolicy policy;
    std::set<std::string> allowed_model_licenses;

    static LicenseRules from_json_text(std::string_view text);
    static LicenseRules defaults();
};

/// Host and path of a URL after lowercasing and dropping scheme, userinfo,
/// port, query and fragment. Path is at least "/".
struct ParsedUrl {
    std::string host;
    std::string path;
};

/// Throws Error(InvalidUrl).
ParsedUrl parse_url(std::string_view url);

bool domain_pattern_matches(std::string_view pattern, const ParsedUrl& url);

/// Throws Error(InvalidUrl) for unparseable input.
UrlClass classify_url(std::string_view url, const DomainRuleSet& rules);

KeywordClass scan_license_keywords(std::string_view text, const LicenseKeywordSet& keywords);

struct TierDecision {
    LicenseTier tier = LicenseTier::Unknown;
    bool drop = false;
    std::string reason;
};

/// Pure function of its inputs: no document state beyond the source name.
TierDecision decide_tier(UrlClass url_class, KeywordClass kw_class, std::string_view source,
                         const TierPolicy& policy);

/// Applies decide_tier; dropped documents get drop_reason set.
Document assign_tier(Document doc, UrlClass url_class, KeywordClass kw_class,
                     const TierPolicy& policy);

enum class ProvenanceVerdict { Pass, MissingProvenance, DisallowedModelLicense, MissingSeedSource };

const char* to_string(ProvenanceVerdict v);

ProvenanceVerdict check_provenance(const Document& doc,
                                   const std::set<std::string>& allowed_model_licenses);

}  // namespace corpusforge
