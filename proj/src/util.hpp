// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace corpusforge {

/// Number of maximal runs of non-whitespace bytes. This is the token-count
/// proxy used for manifests, packing and mixture accounting.
std::size_t whitespace_token_count(std::string_view text) noexcept;

inline bool is_ascii_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s) noexcept;

/// Reads a whole file; throws Error(Io) on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// One entry per non-blank line, with '#' comment lines skipped and
/// surrounding whitespace trimmed.
std::vector<std::string> parse_line_list(std::string_view contents);

/// Renders 1234567 as "1,234,567".
std::string with_thousands(unsigned long long value);

/// Runs fn(w) for w in [0, workers) on separate threads and rethrows the
/// first failure after all have joined. One worker runs inline.
template <class Fn>
void run_workers(std::size_t workers, Fn&& fn) {
    if (workers <= 1) {
        fn(std::size_t{0});
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                fn(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace corpusforge
