// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include <algorithm>
#include <boost/regex.hpp>

#include "embedded_data.hpp"
#include "error.hpp"
#include "util.hpp"

namespace corpusforge {

namespace {

bool is_ascii(std::string_view text) noexcept {
    for (unsigned char c : text) {
        if (c >= 0x80) return false;
    }
    return true;
}

void push_token(std::string&& token, const StopwordSet& stopwords,
                std::vector<std::string>& out) {
    if (token.empty()) return;
    if (stopwords.count(token) != 0) return;
    out.push_back(std::move(token));
}

// For pure ASCII input NFKC is the identity and ICU's lowercase and
// alphanumeric classes coincide with the ASCII ones.
void tokenize_ascii(std::string_view text, const StopwordSet& stopwords,
                    std::vector<std::string>& out) {
    std::string cur;
    for (char c : text) {
        if (c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            cur.push_back(c);
        } else {
            push_token(std::move(cur), stopwords, out);
            cur.clear();
        }
    }
    push_token(std::move(cur), stopwords, out);
}

void tokenize_unicode(std::string_view text, const StopwordSet& stopwords,
                      std::vector<std::string>& out) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::Io, "ICU NFKC normalizer unavailable");
    }
    icu::UnicodeString input = icu::UnicodeString::fromUTF8(
        icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
    icu::UnicodeString normalized = nfkc->normalize(input, status);
    if (U_FAILURE(status)) {
        throw Error(ErrorCode::Io, "NFKC normalization failed");
    }
    normalized.toLower(icu::Locale::getRoot());

    icu::UnicodeString cur;
    std::string utf8;
    auto flush = [&] {
        if (cur.isEmpty()) return;
        utf8.clear();
        cur.toUTF8String(utf8);
        push_token(std::move(utf8), stopwords, out);
        utf8 = std::string();
        cur.remove();
    };
    for (int32_t i = 0; i < normalized.length();) {
        UChar32 c = normalized.char32At(i);
        i += U16_LENGTH(c);
        if (u_isalnum(c)) {
            cur.append(c);
        } else {
            flush();
        }
    }
    flush();
}

bool is_sentence_terminal(char c) noexcept { return c == '.' || c == '!' || c == '?'; }

}  // namespace

NormalizedTokens normalize_text(std::string_view text, const StopwordSet& stopwords,
                                std::string source_doc_id) {
    NormalizedTokens out;
    out.source_doc_id = std::move(source_doc_id);
    if (is_ascii(text)) {
        tokenize_ascii(text, stopwords, out.tokens);
    } else {
        tokenize_unicode(text, stopwords, out.tokens);
    }
    return out;
}

StopwordSet load_stopwords(std::string_view contents) {
    StopwordSet out;
    for (auto& w : parse_line_list(contents)) {
        out.insert(ascii_lower(w));
    }
    return out;
}

StopwordSet default_stopwords() { return load_stopwords(embedded::stopwords_en()); }

std::vector<TextSpan> sentence_spans(std::string_view text) {
    std::vector<TextSpan> spans;
    auto emit = [&](std::size_t b, std::size_t e) {
        while (b < e && is_ascii_space(text[b])) ++b;
        while (e > b && is_ascii_space(text[e - 1])) --e;
        if (b < e) spans.push_back({b, e});
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            emit(start, i);
            start = i + 1;
        } else if (is_sentence_terminal(c) &&
                   (i + 1 == text.size() || is_ascii_space(text[i + 1]))) {
            emit(start, i + 1);
            start = i + 1;
        }
    }
    emit(start, text.size());
    return spans;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& s : sentence_spans(text)) {
        out.emplace_back(text.substr(s.begin, s.end - s.begin));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct PatternSet::Impl {
    std::vector<std::string> sources;
    std::vector<boost::regex> regexes;
    // Patterns whose matches cannot depend on text outside the window; only
    // these may be screened against the whole document.
    std::vector<bool> screenable;
};

namespace {

bool is_window_local(std::string_view pattern) {
    for (std::string_view anchor : {"^", "$", "\\A", "\\z", "\\Z", "\\G", "\\B", "(?=", "(?!",
                                    "(?<=", "(?<!", "(?m", "(?s"}) {
        if (pattern.find(anchor) != std::string_view::npos) return false;
    }
    return true;
}

}  // namespace

PatternSet::PatternSet() : impl_(std::make_unique<Impl>()) {}
PatternSet::~PatternSet() = default;
PatternSet::PatternSet(const PatternSet& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}
PatternSet& PatternSet::operator=(const PatternSet& other) {
    if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
    return *this;
}
PatternSet::PatternSet(PatternSet&&) noexcept = default;
PatternSet& PatternSet::operator=(PatternSet&&) noexcept = default;

PatternSet PatternSet::compile(const std::vector<std::string>& patterns,
                               bool case_insensitive) {
    PatternSet out;
    boost::regex::flag_type flags = boost::regex::perl;
    if (case_insensitive) flags |= boost::regex::icase;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        try {
            out.impl_->regexes.emplace_back(patterns[i], flags);
        } catch (const boost::regex_error& e) {
            throw Error(ErrorCode::InvalidPattern, "pattern " + std::to_string(i + 1) + " '" +
                                                       patterns[i] + "': " + e.what());
        }
        out.impl_->sources.push_back(patterns[i]);
        out.impl_->screenable.push_back(is_window_local(patterns[i]));
    }
    return out;
}

PatternSet PatternSet::from_file_contents(std::string_view contents, bool case_insensitive) {
    return compile(parse_line_list(contents), case_insensitive);
}

PatternSet PatternSet::defaults() {
    return from_file_contents(embedded::boilerplate_patterns());
}

bool PatternSet::empty() const noexcept { return impl_->regexes.empty(); }

const std::vector<std::string>& PatternSet::sources() const noexcept {
    return impl_->sources;
}

bool PatternSet::excludes(std::string_view window) const {
    for (const auto& re : impl_->regexes) {
        if (boost::regex_search(window.begin(), window.end(), re)) return true;
    }
    return false;
}

int PatternSet::first_match(std::string_view text) const {
    for (std::size_t i = 0; i < impl_->regexes.size(); ++i) {
        if (boost::regex_search(text.begin(), text.end(), impl_->regexes[i])) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

bool PatternSet::may_exclude_any(std::string_view joined) const {
    for (std::size_t i = 0; i < impl_->regexes.size(); ++i) {
        if (!impl_->screenable[i]) return true;
        if (boost::regex_search(joined.begin(), joined.end(), impl_->regexes[i])) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

bool NGramHashSet::contains(Hash64 h) const {
    return std::binary_search(hashes.begin(), hashes.end(), h);
}

Hash64 hash_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t count) {
    Fnv1a64 h;
    for (std::size_t k = 0; k < count; ++k) {
        if (k != 0) h.update(' ');
        h.update(tokens[begin + k]);
    }
    return h.digest();
}

NGramHashSet ngrams(const NormalizedTokens& normalized, std::size_t n,
                    const PatternSet* filter) {
    if (n < 1) throw Error(ErrorCode::InvalidN, "n-gram size must be >= 1");
    NGramHashSet out;
    out.n = n;
    const auto& tokens = normalized.tokens;
    if (tokens.size() < n) return out;
    const std::size_t windows = tokens.size() - n + 1;

    bool check_windows = false;
    if (filter != nullptr && !filter->empty()) {
        std::string joined;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i != 0) joined.push_back(' ');
            joined += tokens[i];
        }
        check_windows = filter->may_exclude_any(joined);
    }

    out.hashes.reserve(windows);
    std::string window;
    for (std::size_t i = 0; i < windows; ++i) {
        if (check_windows) {
            window.clear();
            for (std::size_t k = 0; k < n; ++k) {
                if (k != 0) window.push_back(' ');
                window += tokens[i + k];
            }
            if (filter->excludes(window)) continue;
        }
        out.hashes.push_back(hash_tokens(tokens, i, n));
    }
    std::sort(out.hashes.begin(), out.hashes.end());
    out.hashes.erase(std::unique(out.hashes.begin(), out.hashes.end()), out.hashes.end());
    return out;
}

TextFingerprinter::TextFingerprinter(StopwordSet stopwords, PatternSet patterns,
                                     std::size_t n)
    : stopwords_(std::move(stopwords)), patterns_(std::move(patterns)), n_(n) {
    if (n_ < 1) throw Error(ErrorCode::InvalidN, "n-gram size must be >= 1");
}

TextFingerprinter TextFingerprinter::defaults(std::size_t n) {
    return TextFingerprinter(default_stopwords(), PatternSet::defaults(), n);
}

NormalizedTokens TextFingerprinter::normalize(std::string_view text) const {
    return normalize_text(text, stopwords_);
}

NGramHashSet TextFingerprinter::fingerprint(std::string_view text) const {
    return ngrams(normalize_text(text, stopwords_), n_, &patterns_);
}

Hash64 TextFingerprinter::config_hash() const {
    std::vector<std::string> words(stopwords_.begin(), stopwords_.end());
    std::sort(words.begin(), words.end());
    Fnv1a64 h;
    h.update("stopwords\n");
    for (const auto& w : words) {
        h.update(w);
        h.update('\n');
    }
    h.update("patterns\n");
    for (const auto& p : patterns_.sources()) {
        h.update(p);
        h.update('\n');
    }
    h.update("n=" + std::to_string(n_));
    return h.digest();
}

}  // namespace corpusforge
