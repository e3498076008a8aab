// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/qc.hpp"

#include "umdv/util.hpp"

namespace umdv {

std::string to_string(Category c) {
    switch (c) {
    case Category::Documentation: return "Documentation";
    case Category::Installation: return "Installation";
    case Category::Security: return "Security";
    case Category::InformationModel: return "Information Model";
    case Category::Operations: return "Operations";
    case Category::Support: return "Support";
    case Category::SpecificQC: return "Specific QC";
    }
    return "";
}

const std::vector<QcCheckDescriptor>& builtin_qc_registry() {
    // clang-format off
    static const std::vector<QcCheckDescriptor> registry = {
        {"QC_DOC_1",     Category::Documentation,    "Release notes provisioning",          true,  false},
        {"QC_DOC_2",     Category::Documentation,    "User documentation",                  true,  false},
        {"QC_DOC_3",     Category::Documentation,    "API documentation",                   false, false},
        {"QC_DOC_4",     Category::Documentation,    "Admin documentation",                 true,  false},
        {"QC_DOC_5",     Category::Documentation,    "Software license",                    true,  true},
        {"QC_DIST_1",    Category::Installation,     "Binary distribution (RPM, DEB)",      true,  true},
        {"QC_UPGRADE_1", Category::Installation,     "Upgrade previous working version",    false, true},
        {"QC_SEC_1",     Category::Security,         "X.509 certificate support",           true,  true},
        {"QC_SEC_2",     Category::Security,         "SHA-2 certificate support",           true,  true},
        {"QC_SEC_3",     Category::Security,         "RFC proxy support",                   false, true},
        {"QC_SEC_4",     Category::Security,         "ARGUS auth integration",              false, true},
        {"QC_SEC_5",     Category::Security,         "World writable files",                true,  true},
        {"QC_SEC_6",     Category::Security,         "Passwords in world readable files",   true,  true},
        {"QC_INFO_1",    Category::InformationModel, "GLUE schema 1.3 support",             false, true},
        {"QC_INFO_2",    Category::InformationModel, "GLUE schema 2.0 support",             true,  true},
        {"QC_INFO_3",    Category::InformationModel, "Middleware version",                  false, true},
        {"QC_MON_1",     Category::Operations,       "Service probes",                      false, true},
        {"QC_ACC_1",     Category::Operations,       "Accounting records",                  true,  true},
        {"QC_SUPPORT_1", Category::Support,          "Bug tracking system",                 true,  true},
        {"QC_FUNC_1",    Category::SpecificQC,       "Basic functionality test",            true,  true},
        {"QC_FUNC_2",    Category::SpecificQC,       "New feature/bug fixes test",          false, true},
    };
    // clang-format on
    return registry;
}

const QcCheckDescriptor& find_check(const std::string& id) {
    for (const auto& d : builtin_qc_registry())
        if (d.id == id)
            return d;
    throw Error("unknown QC check id: " + id);
}

std::string to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::Ok: return "OK";
    case CheckStatus::Warning: return "WARNING";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::NotApplicable: return "NA";
    }
    return "";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Ok: return "OK";
    case Verdict::Warning: return "WARNING";
    case Verdict::Fail: return "FAIL";
    }
    return "";
}

Verdict aggregate_verdict(const std::vector<CheckResult>& results) {
    bool critical_fail = false;
    bool degraded = false;
    for (const auto& r : results) {
        const QcCheckDescriptor& desc = find_check(r.check_id);
        switch (r.status) {
        case CheckStatus::Fail:
            if (desc.critical)
                critical_fail = true;
            degraded = true;
            break;
        case CheckStatus::Warning:
            degraded = true;
            break;
        case CheckStatus::Ok:
        case CheckStatus::NotApplicable:
            break;
        }
    }
    if (critical_fail)
        return Verdict::Fail;
    return degraded ? Verdict::Warning : Verdict::Ok;
}

}  // namespace umdv
