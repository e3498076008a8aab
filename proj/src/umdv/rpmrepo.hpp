// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <map>
#include <string>

#include "umdv/repoindex.hpp"
#include "umdv/util.hpp"

namespace umdv {

struct RepomdEntry {
    std::string location;
    std::string checksum_type;
    std::string checksum_hex;
};

// Parses repomd.xml into a map keyed by data type ("primary", "filelists", ...).
std::map<std::string, RepomdEntry> parse_repomd(const std::string& xml);

// Parses primary.xml (already decompressed).
std::vector<Package> parse_primary(const std::string& xml);

// Loads a repository rooted at base (URL or directory): repomd.xml is
// expected under <base>/repodata/.  The primary checksum is verified
// before parsing; a mismatch raises Error.
RepoIndex load_rpm_repo(const std::string& base, int timeout_s = 30);

// Writes repodata/repomd.xml plus a gzipped primary for the given
// packages.  Used to build fixture repositories.
void write_rpm_repo(const fs::path& dir, const std::vector<Package>& packages);

}  // namespace umdv
