// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <vector>

#include "umdv/repoindex.hpp"

namespace umdv {

/// Does `provided` satisfy `required`? Names must match. An Any-relation
/// requirement accepts any provider of the name. Under the RPM grammar an
/// unversioned provide also satisfies versioned requirements; under DEB it
/// does not (plain virtual packages never match versioned dependencies).
/// Versioned pairs use range-overlap semantics under the flavor's ordering.
bool satisfies(const VersionConstraint& provided, const VersionConstraint& required,
               Flavor flavor);

/// Architecture compatibility: "noarch"/"all" acts as a wildcard on either
/// side (noarch packages may depend on arch-specific ones and vice versa);
/// otherwise the architectures must match. Empty strings act as wildcards.
bool arch_compatible(const std::string& requiring_arch, const std::string& providing_arch);

/// Every requirement of every package in candidate+base_repos must be
/// satisfiable by some provide (or RPM file path) in the union. Returns the
/// unsatisfied entries ordered by (requiring name, constraint name).
/// Throws on flavor mismatch between the united repositories.
std::vector<UnmetDependency> compute_closure(const RepoIndex& candidate,
                                             const std::vector<RepoIndex>& base_repos);

/// Merge several indexes of one flavor into a single searchable index.
RepoIndex merge_indexes(const std::vector<RepoIndex>& repos, Flavor flavor);

/// Fetch and parse repository metadata (repomd/primary for RPM, Packages
/// for DEB). Throws Error when the URL does not point at a repository.
RepoIndex fetch_repo_metadata(const std::string& url, Flavor flavor, int timeout_s = 30);

/// Outcome of a release-candidate repository check.
struct RcSummary {
    Flavor flavor = Flavor::Rpm;
    std::string candidate;
    std::vector<std::string> base_repos;
    std::size_t package_count = 0;  // united package set size
    std::vector<UnmetDependency> unmet;
    std::vector<std::string> fetch_errors;  // "url: reason" per failed repo

    bool ok() const { return unmet.empty() && fetch_errors.empty(); }
};

/// Fetches candidate and base repositories (concurrently) and computes the
/// dependency closure over their union. Any fetch failure is fail-closed:
/// no closure is attempted and the summary reports the unavailable repos.
RcSummary rc_check(const std::string& candidate_url, const std::vector<std::string>& base_urls,
                   Flavor flavor, int timeout_s = 30);

}  // namespace umdv
