// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#pragma once

#include <stdexcept>
#include <string>

namespace corpusforge {

enum class ErrorCode {
    Io,
    MalformedRecord,
    DuplicateId,
    InvalidN,
    InvalidPattern,
    InvalidUrl,
    InvalidTarget,
    EmptyBenchmark,
    PartitionOverlap,
    Format,
    Config,
    ConfigMismatch,
    Stage,
    ScopeViolation,
    TaxonomyMismatch,
    UnsatisfiableTemplate,
    InvalidArgument,
};

const char* error_code_name(ErrorCode code);

/// Base exception for every failure raised by the core library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace corpusforge
