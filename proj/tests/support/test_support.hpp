// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace cftest {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "cftest-XXXXXX").string();
        if (mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(std::string_view name) const { return path_ / name; }

private:
    fs::path path_;
};

inline void write_text(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline corpusforge::Document make_doc(std::string id, std::string text, std::string source = "web",
                                      std::optional<std::string> url = std::nullopt) {
    corpusforge::Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    d.source = std::move(source);
    d.url = std::move(url);
    d.license_tier = corpusforge::LicenseTier::Tier1;
    return d;
}

/// Tokens that are never stopwords and never collide with each other for
/// distinct (prefix, index) pairs: letters followed by digits.
inline std::string token(std::string_view prefix, std::uint64_t i) {
    return std::string(prefix) + std::to_string(i);
}

/// n random tokens drawn from a vocabulary of `vocab` words, space-joined.
inline std::string random_text(std::mt19937_64& rng, std::size_t n, std::uint64_t vocab = 50000,
                               std::string_view prefix = "w") {
    std::uniform_int_distribution<std::uint64_t> pick(0, vocab - 1);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += token(prefix, pick(rng));
    }
    return out;
}

/// Directory holding the repository's data/ files.
inline fs::path data_dir() { return fs::path(CF_SOURCE_DIR) / "data"; }

}  // namespace cftest
