// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

namespace umdv {

enum class Category {
    Documentation,
    Installation,
    Security,
    InformationModel,
    Operations,
    Support,
    SpecificQC,
};

std::string to_string(Category c);

struct QcCheckDescriptor {
    std::string id;  // "QC_SEC_1"
    Category category;
    std::string description;
    bool critical;
    bool automated;
};

/// The built-in registry: 21 descriptors, 17 automated, 13 critical.
const std::vector<QcCheckDescriptor>& builtin_qc_registry();

/// Lookup by id; throws Error for ids not in the registry.
const QcCheckDescriptor& find_check(const std::string& id);

enum class CheckStatus { Ok, Warning, Fail, NotApplicable };

/// "OK", "WARNING", "FAIL", "NA".
std::string to_string(CheckStatus s);

struct CheckResult {
    std::string check_id;
    CheckStatus status = CheckStatus::NotApplicable;
    std::string detail;          // human log excerpt; for NA, why it was skipped
    double duration_s = 0.0;
    std::vector<std::string> artifacts;  // produced files (logs, certs)
};

enum class Verdict { Ok, Warning, Fail };

std::string to_string(Verdict v);

/// Fail iff any critical check failed; else Warning iff anything failed or
/// warned; else Ok. NotApplicable results are ignored. Throws on a
/// check_id missing from the registry.
Verdict aggregate_verdict(const std::vector<CheckResult>& results);

}  // namespace umdv
