// Copyright 2026-present the tokenrank project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tokenrank/error.hpp"

namespace tokenrank {

std::string_view
to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::EmptyCorpus: return "EmptyCorpus";
        case ErrorCode::TooFewVectors: return "TooFewVectors";
        case ErrorCode::IndivisibleDimension: return "IndivisibleDimension";
        case ErrorCode::CodeOutOfRange: return "CodeOutOfRange";
        case ErrorCode::TargetTooLarge: return "TargetTooLarge";
        case ErrorCode::NonRectangularGrid: return "NonRectangularGrid";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::Corrupt: return "Corrupt";
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::EmptyIndex: return "EmptyIndex";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::ServiceError: return "ServiceError";
        case ErrorCode::ProtocolMismatch: return "ProtocolMismatch";
        case ErrorCode::NoPositives: return "NoPositives";
        case ErrorCode::MissingQrels: return "MissingQrels";
        case ErrorCode::EmptyScores: return "EmptyScores";
        case ErrorCode::MissingAuxImage: return "MissingAuxImage";
        case ErrorCode::FactorOutOfRange: return "FactorOutOfRange";
    }
    return "Unknown";
}

bool
is_remote_error(ErrorCode code) {
    return code == ErrorCode::Timeout || code == ErrorCode::ServiceError ||
           code == ErrorCode::ProtocolMismatch;
}

Error::Error(ErrorCode code, const std::string& message, int status)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      status_(status) {
}

void
fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace tokenrank
