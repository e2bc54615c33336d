// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hash.hpp"

namespace corpusforge {

using StopwordSet = std::unordered_set<std::string>;

/// Lowercase, whitespace-free, stopword-free tokens of one text.
struct NormalizedTokens {
    std::vector<std::string> tokens;
    std::string source_doc_id;
};

/// NFKC, lowercase, split on every non-alphanumeric code point, drop
/// stopwords. Invalid UTF-8 sequences become U+FFFD and therefore separators.
NormalizedTokens normalize_text(std::string_view text, const StopwordSet& stopwords,
                                std::string source_doc_id = {});

StopwordSet default_stopwords();
StopwordSet load_stopwords(std::string_view contents);

/// Byte range [begin, end) into the original text.
struct TextSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Sentence boundaries: '.', '!' or '?' followed by whitespace or end of
/// text, and every newline. Spans are trimmed; empty ones are dropped.
std::vector<TextSpan> sentence_spans(std::string_view text);
std::vector<std::string> split_sentences(std::string_view text);

/// Compiled set of Perl-syntax regular expressions. Used for n-gram window
/// exclusion (boilerplate) and for metadata rules.
class PatternSet {
public:
    PatternSet();
    ~PatternSet();
    PatternSet(const PatternSet&);
    PatternSet& operator=(const PatternSet&);
    PatternSet(PatternSet&&) noexcept;
    PatternSet& operator=(PatternSet&&) noexcept;

    /// Throws Error(InvalidPattern) naming the offending line.
    static PatternSet compile(const std::vector<std::string>& patterns,
                              bool case_insensitive = false);
    static PatternSet from_file_contents(std::string_view contents,
                                         bool case_insensitive = false);
    /// The shipped boilerplate patterns.
    static PatternSet defaults();

    bool empty() const noexcept;
    const std::vector<std::string>& sources() const noexcept;

    /// True when any pattern matches inside the window text.
    bool excludes(std::string_view window) const;

    /// Index of the first matching pattern, or -1.
    int first_match(std::string_view text) const;

    /// False only when no window of `joined` (the space-joined token list)
    /// can be excluded; a cheap whole-document screen.
    bool may_exclude_any(std::string_view joined) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Unique n-gram hashes of one token list, kept sorted.
struct NGramHashSet {
    std::size_t n = 13;
    std::vector<Hash64> hashes;

    std::size_t total_unique() const noexcept { return hashes.size(); }
    bool contains(Hash64 h) const;
};

/// FNV-1a of the window tokens joined by single spaces; windows excluded by
/// `filter` are skipped. Throws Error(InvalidN) when n < 1.
NGramHashSet ngrams(const NormalizedTokens& tokens, std::size_t n,
                    const PatternSet* filter = nullptr);

Hash64 hash_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t count);

/// The normalize -> filter -> n-gram -> hash path shared by index
/// construction and corpus scanning.
class TextFingerprinter {
public:
    TextFingerprinter(StopwordSet stopwords, PatternSet patterns, std::size_t n = 13);

    static TextFingerprinter defaults(std::size_t n = 13);

    NGramHashSet fingerprint(std::string_view text) const;
    NormalizedTokens normalize(std::string_view text) const;

    const StopwordSet& stopwords() const noexcept { return stopwords_; }
    const PatternSet& patterns() const noexcept { return patterns_; }
    std::size_t n() const noexcept { return n_; }

    /// Hash over stopwords, pattern sources and n; stored in indexes so a
    /// scan can refuse a mismatched configuration.
    Hash64 config_hash() const;

private:
    StopwordSet stopwords_;
    PatternSet patterns_;
    std::size_t n_;
};

}  // namespace corpusforge
