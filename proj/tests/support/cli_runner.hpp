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

// Runs the tokenrank executable as a child process.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifndef TOKENRANK_CLI_PATH
#error "TOKENRANK_CLI_PATH must point at the tokenrank executable"
#endif

namespace tokenrank::testkit {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string
shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') {
            q += "'\\''";
        } else {
            q += c;
        }
    }
    return q + "'";
}

inline std::string
slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// `scratch` receives the captured stdout / stderr files. `env` entries are
/// set for the child only; an empty value unsets the variable.
inline CliResult
run_cli(const std::vector<std::string>& args,
        const std::filesystem::path& scratch,
        const std::map<std::string, std::string>& env = {}) {
    std::string cmd;
    for (const auto& [k, v] : env) {
        cmd += v.empty() ? "unset " + k + "; " : k + "=" + shell_quote(v) + " ";
    }
    cmd += shell_quote(TOKENRANK_CLI_PATH);
    for (const auto& a : args) {
        cmd += " " + shell_quote(a);
    }
    const auto out = scratch / "cli.stdout";
    const auto err = scratch / "cli.stderr";
    cmd += " >" + shell_quote(out.string()) + " 2>" + shell_quote(err.string());
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace tokenrank::testkit
