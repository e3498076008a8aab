// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "umdv/context.hpp"
#include "umdv/ldif.hpp"
#include "umdv/qc.hpp"
#include "umdv/repoindex.hpp"

namespace umdv {

struct InfoEndpoint {
    std::string host = "localhost";
    int port = 2170;
    std::string base_dn;
    // Optional command template; placeholders {host}, {port}, {base_dn}.
    // Empty means the standard LDAP query tool.
    std::string fetch_command;
};

/// Expand {name} placeholders. Unknown placeholders are left verbatim.
std::string expand_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& vars);

/// Run the endpoint's fetch command and return raw LDIF text.
/// Throws Error on command failure or empty output ("no published
/// information").
std::string fetch_info_raw(const InfoEndpoint& endpoint, const RunContext& ctx);

/// fetch_info_raw + parse; guarantees at least one entry.
LdifDocument fetch_info(const InfoEndpoint& endpoint, const RunContext& ctx);

/// Run an external schema validator over a document file. check_id names
/// the QC descriptor the result is attributed to (QC_INFO_1 or QC_INFO_2).
/// Exit 0 maps to Ok, anything else to Fail with verbatim output; a
/// missing executable maps to Fail "validator unavailable".
CheckResult run_external_validator(const std::string& check_id, const std::string& command,
                                   const fs::path& document_path, const RunContext& ctx);

/// QC_INFO_3: the published middleware version must equal the version of
/// an installed candidate package. version_attribute values with a
/// "MiddlewareVersion=" prefix have the prefix stripped first.
CheckResult check_middleware_version(const LdifDocument& document,
                                     const std::vector<Package>& installed,
                                     const std::string& version_attribute);

}  // namespace umdv
