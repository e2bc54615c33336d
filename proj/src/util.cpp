// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "util.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"
#include "hash.hpp"

namespace corpusforge {

std::string hash_to_hex(Hash64 value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
        value >>= 4;
    }
    return out;
}

Hash64 hash_from_hex(std::string_view hex) {
    if (hex.empty() || hex.size() > 16) {
        throw Error(ErrorCode::Format, "bad hash literal '" + std::string(hex) + "'");
    }
    Hash64 value = 0;
    for (char c : hex) {
        value <<= 4;
        if (c >= '0' && c <= '9') {
            value |= static_cast<Hash64>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            value |= static_cast<Hash64>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            value |= static_cast<Hash64>(c - 'A' + 10);
        } else {
            throw Error(ErrorCode::Format, "bad hash literal '" + std::string(hex) + "'");
        }
    }
    return value;
}

std::size_t whitespace_token_count(std::string_view text) noexcept {
    std::size_t count = 0;
    bool in_token = false;
    for (char c : text) {
        if (is_ascii_space(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCode::Io, "read failed: " + path.string());
    }
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(ErrorCode::Io, "write failed: " + path.string());
    }
}

std::vector<std::string> parse_line_list(std::string_view contents) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= contents.size()) {
        std::size_t nl = contents.find('\n', pos);
        if (nl == std::string_view::npos) nl = contents.size();
        std::string_view line = trim(contents.substr(pos, nl - pos));
        if (!line.empty() && line.front() != '#') {
            out.emplace_back(line);
        }
        pos = nl + 1;
    }
    return out;
}

std::string with_thousands(unsigned long long value) {
    std::string digits = std::to_string(value);
    std::string out;
    const std::size_t lead = digits.size() % 3;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i != 0 && (i + 3 - lead) % 3 == 0) out.push_back(',');
        out.push_back(digits[i]);
    }
    return out;
}

}  // namespace corpusforge
