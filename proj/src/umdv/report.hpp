// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "umdv/closure.hpp"
#include "umdv/context.hpp"
#include "umdv/qc.hpp"
#include "umdv/util.hpp"

namespace umdv {

struct ValidationReport {
    std::string schema_version = "1";
    std::string product;
    std::string release;
    std::string os;
    std::vector<std::string> repositories;
    std::string started;   // RFC 3339 UTC
    std::string finished;  // RFC 3339 UTC
    RunMode mode = RunMode::Mock;
    std::vector<CheckResult> results;
    Verdict verdict = Verdict::Ok;
};

enum class ReportFormat { Text, Json };

/// Render the report. The JSON form is stable: render, parse and render
/// again yields identical bytes.
std::string render_report(const ValidationReport& report, ReportFormat format);

/// Inverse of the JSON rendering.
ValidationReport parse_report_json(const std::string& text);

/// Write <report_dir>/<product>-<release>-<os>-<stamp>.txt and .json;
/// returns both paths.
std::vector<fs::path> write_report(const ValidationReport& report, const fs::path& report_dir);

/// Process exit code for a verdict: Ok 0, Warning 1, Fail 2.
int exit_code_for(Verdict verdict);

std::string render_rc_summary(const RcSummary& summary, ReportFormat format);

}  // namespace umdv
