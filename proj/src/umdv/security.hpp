// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "umdv/deploy.hpp"
#include "umdv/qc.hpp"
#include "umdv/util.hpp"

namespace umdv {

enum class FindingKind { WorldWritable, ReadableSecret };

std::string to_string(FindingKind kind);

struct ScanFinding {
    fs::path path;
    FindingKind kind = FindingKind::WorldWritable;
    std::string detail;
};

/// Regular files and directories under the roots with the other-write bit
/// set. Sticky directories (/tmp style) are exempt, symlinks are skipped.
/// Unreadable subtrees are recorded in notes when given.
std::vector<ScanFinding> scan_world_writable(const std::vector<fs::path>& roots,
                                             std::vector<std::string>* notes = nullptr);

/// Case-insensitive patterns flagging credential assignments. The first
/// capture group holds the key-and-separator part, never the value.
const std::vector<std::regex>& default_secret_patterns();

/// World-readable regular files whose text matches a secret pattern; at
/// most one finding per file, citing the first matching line. Files with a
/// NUL byte in the first 8 KiB are treated as binary and skipped.
std::vector<ScanFinding> scan_readable_secrets(
    const std::vector<fs::path>& roots,
    const std::vector<std::regex>& patterns = default_secret_patterns(),
    std::vector<std::string>* notes = nullptr);

/// Write findings one per line to <dir>/<name> and return that path.
fs::path dump_findings(const std::vector<ScanFinding>& findings, const fs::path& dir,
                       const std::string& name);

/// QC_DOC_5: every installed package must carry a license, either in its
/// package metadata or as a LICENSE/COPYING file under usr/share/doc.
CheckResult check_license(const DeploymentOutcome& outcome);

/// QC_SUPPORT_1: the configured support channel answers an HTTP GET with a
/// 2xx or 3xx status. NotApplicable when no channel is configured.
CheckResult check_support_channel(const std::string& url, int timeout_s = 10);

/// QC_SEC_1 and QC_SEC_2 from a single TLS probe: chain validity against
/// the given CA, and a SHA-2 family signature digest on the leaf.
std::pair<CheckResult, CheckResult> check_tls_support(const std::string& host, int port,
                                                      const fs::path& ca_cert);

}  // namespace umdv
