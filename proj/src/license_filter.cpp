// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "license_filter.hpp"

#include <algorithm>

#include "embedded_data.hpp"
#include "util.hpp"

namespace corpusforge {

using nlohmann::json;

const char* to_string(UrlClass c) {
    switch (c) {
        case UrlClass::Governmental: return "Governmental";
        case UrlClass::PermissiveDomain: return "PermissiveDomain";
        case UrlClass::Blocked: return "Blocked";
        case UrlClass::Unmatched: return "Unmatched";
    }
    return "Unmatched";
}

const char* to_string(KeywordClass c) {
    switch (c) {
        case KeywordClass::Permissive: return "Permissive";
        case KeywordClass::Restrictive: return "Restrictive";
        case KeywordClass::None: return "None";
    }
    return "None";
}

const char* to_string(ProvenanceVerdict v) {
    switch (v) {
        case ProvenanceVerdict::Pass: return "Pass";
        case ProvenanceVerdict::MissingProvenance: return "MissingProvenance";
        case ProvenanceVerdict::DisallowedModelLicense: return "DisallowedModelLicense";
        case ProvenanceVerdict::MissingSeedSource: return "MissingSeedSource";
    }
    return "Pass";
}

namespace {

bool is_lowercase(std::string_view s) {
    return std::none_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

void validate_patterns(const std::vector<std::string>& patterns, const char* list) {
    for (const auto& p : patterns) {
        if (p.empty() || !is_lowercase(p)) {
            throw Error(ErrorCode::Config, std::string(list) + ": pattern '" + p +
                                               "' must be non-empty and lowercase");
        }
        auto star = p.find('*');
        if (star != std::string::npos && (star + 1 != p.size() || star < 2 || p[star - 1] != '.')) {
            throw Error(ErrorCode::Config, std::string(list) + ": unsupported glob '" + p +
                                               "' (only 'label.*' is supported)");
        }
    }
}

bool is_host_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
}

bool boundary_after(std::string_view s, std::size_t pos) {
    return pos >= s.size() || s[pos] == '.' || s[pos] == '/';
}

bool match_suffix_pattern(std::string_view pattern, const ParsedUrl& url) {
    // The leading '.' of the pattern must land on a label boundary inside the
    // host; prefixing the host with '.' makes the host start one as well.
    std::string s;
    s.reserve(url.host.size() + url.path.size() + 1);
    s.push_back('.');
    s += url.host;
    s += url.path;
    const bool ends_on_boundary = pattern.back() == '.' || pattern.back() == '/';
    for (std::size_t pos = s.find(pattern); pos != std::string::npos && pos <= url.host.size();
         pos = s.find(pattern, pos + 1)) {
        if (ends_on_boundary || boundary_after(s, pos + pattern.size())) return true;
    }
    return false;
}

bool match_path_prefix(std::string_view pattern, const ParsedUrl& url) {
    std::string s = url.host + url.path;
    if (!std::string_view(s).starts_with(pattern)) return false;
    return pattern.back() == '/' || (pattern.size() < s.size() && s[pattern.size()] == '/');
}

bool match_glob(std::string_view pattern, const ParsedUrl& url) {
    // "label.*": the host's last two labels are "label" and any TLD, or the
    // labels end with "label.<tld>" after further subdomains.
    std::string_view stem = pattern.substr(0, pattern.size() - 2);
    std::string_view host = url.host;
    auto last_dot = host.rfind('.');
    if (last_dot == std::string_view::npos || last_dot + 1 == host.size()) return false;
    std::string_view before_tld = host.substr(0, last_dot);
    if (!before_tld.ends_with(stem)) return false;
    std::size_t start = before_tld.size() - stem.size();
    return start == 0 || before_tld[start - 1] == '.';
}

std::vector<std::string> string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_array()) throw Error(ErrorCode::Config, std::string(key) + " must be a list");
    for (const auto& v : *it) {
        if (!v.is_string()) throw Error(ErrorCode::Config, std::string(key) + " entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

void DomainRuleSet::validate() const {
    validate_patterns(gov_patterns, "gov_patterns");
    validate_patterns(permissive_domains, "permissive_domains");
    validate_patterns(blocklist, "blocklist");
}

void LicenseKeywordSet::validate() const {
    for (const auto* list : {&permissive_keywords, &restrictive_keywords}) {
        for (const auto& k : *list) {
            if (k.empty() || !is_lowercase(k)) {
                throw Error(ErrorCode::Config, "keyword '" + k + "' must be non-empty and lowercase");
            }
        }
    }
    for (const auto& k : permissive_keywords) {
        if (std::find(restrictive_keywords.begin(), restrictive_keywords.end(), k) !=
            restrictive_keywords.end()) {
            throw Error(ErrorCode::Config, "keyword '" + k + "' is both permissive and restrictive");
        }
    }
}

LicenseRules LicenseRules::from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("license rules: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::Config, "license rules must be an object");
    LicenseRules r;
    r.domains.gov_patterns = string_list(j, "gov_patterns");
    r.domains.permissive_domains = string_list(j, "permissive_domains");
    r.domains.blocklist = string_list(j, "blocklist");
    r.keywords.permissive_keywords = string_list(j, "permissive_keywords");
    r.keywords.restrictive_keywords = string_list(j, "restrictive_keywords");
    if (auto it = j.find("source_tiers"); it != j.end()) {
        if (!it->is_object()) throw Error(ErrorCode::Config, "source_tiers must be an object");
        for (const auto& [source, tier] : it->items()) {
            try {
                r.policy.source_tiers[source] = parse_license_tier(tier.get<std::string>());
            } catch (const std::exception&) {
                throw Error(ErrorCode::Config, "source_tiers: bad tier for '" + source + "'");
            }
        }
    }
    for (auto& l : string_list(j, "allowed_model_licenses")) {
        r.allowed_model_licenses.insert(std::move(l));
    }
    r.domains.validate();
    r.keywords.validate();
    return r;
}

LicenseRules LicenseRules::defaults() { return from_json_text(embedded::license_rules()); }

ParsedUrl parse_url(std::string_view raw) {
    std::string url = ascii_lower(trim(raw));
    if (url.empty()) throw Error(ErrorCode::InvalidUrl, "empty url");
    if (std::any_of(url.begin(), url.end(), [](char c) { return is_ascii_space(c); })) {
        throw Error(ErrorCode::InvalidUrl, "whitespace in url '" + url + "'");
    }
    std::string_view rest = url;
    if (auto scheme_end = rest.find("://"); scheme_end != std::string_view::npos) {
        std::string_view scheme = rest.substr(0, scheme_end);
        if (scheme.empty() || !std::all_of(scheme.begin(), scheme.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '+' ||
                       c == '-' || c == '.';
            })) {
            throw Error(ErrorCode::InvalidUrl, "bad scheme in '" + url + "'");
        }
        rest.remove_prefix(scheme_end + 3);
    }
    std::size_t auth_end = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, auth_end);
    std::string_view tail = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) {
        authority.remove_prefix(at + 1);
    }
    if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        std::string_view port = authority.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw Error(ErrorCode::InvalidUrl, "bad port in '" + url + "'");
        }
        authority = authority.substr(0, colon);
    }
    while (!authority.empty() && authority.back() == '.') authority.remove_suffix(1);
    if (authority.empty() || authority.front() == '.' ||
        !std::all_of(authority.begin(), authority.end(), is_host_char) ||
        authority.find("..") != std::string_view::npos) {
        throw Error(ErrorCode::InvalidUrl, "bad host in '" + url + "'");
    }
    ParsedUrl out;
    out.host = std::string(authority);
    std::string_view path = tail.substr(0, tail.find_first_of("?#"));
    out.path = path.empty() ? std::string("/") : std::string(path);
    return out;
}

bool domain_pattern_matches(std::string_view pattern, const ParsedUrl& url) {
    if (pattern.empty()) return false;
    if (pattern.ends_with(".*")) return match_glob(pattern, url);
    if (pattern.front() == '.') return match_suffix_pattern(pattern, url);
    return match_path_prefix(pattern, url);
}

UrlClass classify_url(std::string_view url, const DomainRuleSet& rules) {
    const ParsedUrl parsed = parse_url(url);
    auto any = [&](const std::vector<std::string>& patterns) {
        return std::any_of(patterns.begin(), patterns.end(),
                           [&](const std::string& p) { return domain_pattern_matches(p, parsed); });
    };
    if (any(rules.blocklist)) return UrlClass::Blocked;
    if (any(rules.gov_patterns)) return UrlClass::Governmental;
    if (any(rules.permissive_domains)) return UrlClass::PermissiveDomain;
    return UrlClass::Unmatched;
}

KeywordClass scan_license_keywords(std::string_view text, const LicenseKeywordSet& keywords) {
    const std::string lowered = ascii_lower(text);
    for (const auto& k : keywords.restrictive_keywords) {
        if (lowered.find(k) != std::string::npos) return KeywordClass::Restrictive;
    }
    for (const auto& k : keywords.permissive_keywords) {
        if (lowered.find(k) != std::string::npos) return KeywordClass::Permissive;
    }
    return KeywordClass::None;
}

TierDecision decide_tier(UrlClass url_class, KeywordClass kw_class, std::string_view source,
                         const TierPolicy& policy) {
    if (kw_class == KeywordClass::Restrictive) {
        return {LicenseTier::Unknown, true, "RestrictiveKeyword"};
    }
    if (url_class == UrlClass::Blocked) {
        return {LicenseTier::Unknown, true, "BlockedDomain"};
    }
    if (url_class == UrlClass::Governmental) return {LicenseTier::Tier3, false, {}};
    if (url_class == UrlClass::PermissiveDomain || kw_class == KeywordClass::Permissive) {
        return {LicenseTier::Tier1, false, {}};
    }
    if (auto it = policy.source_tiers.find(std::string(source)); it != policy.source_tiers.end() &&
                                                                 it->second != LicenseTier::Unknown) {
        return {it->second, false, {}};
    }
    if (policy.keep_unknown) return {LicenseTier::Unknown, false, {}};
    return {LicenseTier::Unknown, true, "UnknownLicense"};
}

Document assign_tier(Document doc, UrlClass url_class, KeywordClass kw_class,
                     const TierPolicy& policy) {
    TierDecision d = decide_tier(url_class, kw_class, doc.source, policy);
    doc.license_tier = d.tier;
    if (d.drop) doc.drop_reason = d.reason;
    return doc;
}

ProvenanceVerdict check_provenance(const Document& doc,
                                   const std::set<std::string>& allowed_model_licenses) {
    if (doc.synthetic_status == SyntheticStatus::NonSynthetic) return ProvenanceVerdict::Pass;
    if (!doc.generator_provenance) return ProvenanceVerdict::MissingProvenance;
    const auto& p = *doc.generator_provenance;
    if (allowed_model_licenses.count(ascii_lower(p.model_license)) == 0) {
        return ProvenanceVerdict::DisallowedModelLicense;
    }
    if (trim(p.seed_source).empty()) return ProvenanceVerdict::MissingSeedSource;
    return ProvenanceVerdict::Pass;
}

}  // namespace corpusforge
