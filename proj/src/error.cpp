// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The corpusforge Authors

#include "error.hpp"

namespace corpusforge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Io: return "IoError";
        case ErrorCode::MalformedRecord: return "MalformedRecord";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::InvalidN: return "InvalidN";
        case ErrorCode::InvalidPattern: return "InvalidPattern";
        case ErrorCode::InvalidUrl: return "InvalidUrl";
        case ErrorCode::InvalidTarget: return "InvalidTarget";
        case ErrorCode::EmptyBenchmark: return "EmptyBenchmark";
        case ErrorCode::PartitionOverlap: return "PartitionOverlap";
        case ErrorCode::Format: return "FormatError";
        case ErrorCode::Config: return "ConfigError";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::Stage: return "StageError";
        case ErrorCode::ScopeViolation: return "ScopeViolation";
        case ErrorCode::TaxonomyMismatch: return "TaxonomyMismatch";
        case ErrorCode::UnsatisfiableTemplate: return "UnsatisfiableTemplate";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace corpusforge
