// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umdv/context.hpp"
#include "umdv/qc.hpp"

namespace umdv {

struct TestDefinition {
    std::string test;         // executable, relative to the suite root
    std::string description;
    std::string args;         // whitespace-separated argument string
    std::optional<std::chrono::seconds> timeout;  // overrides ctx default

    bool operator==(const TestDefinition&) const = default;
};

struct TestSuite {
    std::string id;
    std::vector<TestDefinition> qc_func_1;
    std::vector<TestDefinition> qc_func_2;
};

/// Load the suite for `id` from a test-definition file (top-level map of
/// id -> {qc_func_1: [...], qc_func_2: [...]}). Unknown ids raise an
/// Error naming the known ids.
TestSuite load_test_definitions(const fs::path& path, const std::string& id);

struct TestOutcome {
    TestDefinition def;
    int exit_status = -1;
    bool timed_out = false;
    std::string output;
    double duration_s = 0.0;
    fs::path log_path;

    bool passed() const { return exit_status == 0 && !timed_out; }
};

/// Run one script: args split on whitespace, ctx.environment exported,
/// cwd = suite_root. Captured output is written to log_path.
TestOutcome execute_test(const TestDefinition& def, const fs::path& suite_root,
                         const RunContext& ctx, const fs::path& log_path);

/// Run both categories; each is Ok iff all its tests pass, NotApplicable
/// when empty. Returns results for (QC_FUNC_1, QC_FUNC_2) in that order.
std::pair<CheckResult, CheckResult> run_suite(const TestSuite& suite, const fs::path& suite_root,
                                              const RunContext& ctx);

}  // namespace umdv
