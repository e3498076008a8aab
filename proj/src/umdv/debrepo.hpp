// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "umdv/repoindex.hpp"
#include "umdv/util.hpp"

namespace umdv {

/// Parses a dependency field ("a (>= 1.0), b | c") into requirement groups.
std::vector<Requirement> parse_deb_relations(const std::string& field);

/// Parses the stanzas of a Packages index.
std::vector<Package> parse_packages(const std::string& text);

/// Loads a flat DEB repository rooted at base: Packages.gz is tried first,
/// then Packages. Neither present raises Error ("not a repository").
RepoIndex load_deb_repo(const std::string& base, int timeout_s = 30);

/// Writes Packages and Packages.gz for the given packages (fixture repos).
void write_deb_index(const fs::path& dir, const std::vector<Package>& packages);

}  // namespace umdv
