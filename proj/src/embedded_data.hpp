// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <string_view>

// Contents of the files under data/, compiled in at build time so the
// library has working defaults without a data directory.
namespace corpusforge::embedded {

std::string_view stopwords_en();
std::string_view boilerplate_patterns();
std::string_view license_rules();
std::string_view safety_keywords();
std::string_view wikipedia_exclusions();
std::string_view instructional_words();

}  // namespace corpusforge::embedded
