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

#include <gtest/gtest.h>

#include "tokenrank/error.hpp"

/// Expects `stmt` to throw tokenrank::Error carrying `code`.
#define EXPECT_TR_ERROR(stmt, expected_code)                                                               \
    do {                                                                                          \
        try {                                                                                     \
            stmt;                                                                                 \
            ADD_FAILURE() << #stmt " did not throw";                                              \
        } catch (const ::tokenrank::Error& e_) {                                                  \
            EXPECT_EQ(e_.code(), expected_code) << #stmt ": " << e_.what();                                \
        } catch (const std::exception& e_) {                                                      \
            ADD_FAILURE() << #stmt " threw a foreign exception: " << e_.what();                   \
        }                                                                                         \
    } while (0)
