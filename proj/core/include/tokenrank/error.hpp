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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tokenrank {

enum class ErrorCode {
    // corpus / grids
    InvalidArgument,
    InvalidGrid,
    DimensionMismatch,
    DuplicateId,
    EmptyCorpus,
    // pq
    TooFewVectors,
    IndivisibleDimension,
    CodeOutOfRange,
    // token selection
    TargetTooLarge,
    NonRectangularGrid,
    // index and file formats
    IoFailure,
    BadMagic,
    UnsupportedVersion,
    Corrupt,
    UnknownId,
    EmptyIndex,
    // re-ranking
    NonFinite,
    OutOfRange,
    Timeout,
    ServiceError,
    ProtocolMismatch,
    // evaluation
    NoPositives,
    MissingQrels,
    EmptyScores,
    // robustness
    MissingAuxImage,
    FactorOutOfRange,
};

std::string_view to_string(ErrorCode code);

/// True for the codes raised by the remote scoring / extraction client.
bool is_remote_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, int status = 0);

    ErrorCode
    code() const noexcept {
        return code_;
    }

    /// HTTP status for ServiceError, 0 otherwise (or when the connection failed).
    int
    status() const noexcept {
        return status_;
    }

private:
    ErrorCode code_;
    int status_;
};

[[noreturn]] void
fail(ErrorCode code, const std::string& message);

}  // namespace tokenrank
