// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umdv/util.hpp"

namespace umdv {

struct RunOptions {
    std::optional<fs::path> cwd;
    // Appended to (and overriding) the inherited environment.
    std::vector<std::pair<std::string, std::string>> env;
    std::chrono::seconds timeout{600};
};

struct RunResult {
    int exit_code = -1;  // 128+signal when killed
    bool timed_out = false;
    std::string output;  // stdout and stderr, merged
    double duration_s = 0.0;
};

/// Run argv[0] with the given arguments, no shell involved.
/// The child is killed (whole process group) once the timeout elapses.
RunResult run_process(const std::vector<std::string>& argv, const RunOptions& opts = {});

/// True if `name` resolves to an executable via PATH (or directly, if it
/// contains a slash).
bool command_exists(const std::string& name);

}  // namespace umdv
