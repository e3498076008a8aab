// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umdv/evr.hpp"

namespace umdv {

enum class Relation { Any, LT, LE, EQ, GE, GT };

std::string to_string(Relation r);

/// One capability term: a name plus an optional version restriction.
/// relation == Any if and only if evr is absent.
struct VersionConstraint {
    std::string name;
    Relation relation = Relation::Any;
    std::optional<Evr> evr;

    bool operator==(const VersionConstraint&) const = default;
};

/// Render as "name" or "name REL evr".
std::string to_string(const VersionConstraint& c);

/// A requirement; alternatives holds one constraint normally, several for
/// DEB "a | b" groups (any one alternative satisfies the requirement).
struct Requirement {
    std::vector<VersionConstraint> alternatives;

    bool operator==(const Requirement&) const = default;
};

struct Package {
    std::string name;
    Evr evr;
    std::string arch;
    std::string license;  // may be empty (not declared)
    std::vector<VersionConstraint> provides;  // includes the synthesized self-provide
    std::vector<Requirement> requirements;
    std::vector<std::string> file_list;  // absolute paths (RPM primary metadata)

    bool operator==(const Package&) const = default;

    std::string identity() const { return name + "-" + format_evr(evr) + "." + arch; }
};

struct RepoIndex {
    Flavor flavor = Flavor::Rpm;
    std::string base_url;
    std::vector<Package> packages;
    std::string fetched_at;  // RFC 3339
};

struct UnmetDependency {
    std::string requiring;  // package identity (name-EVR.arch)
    VersionConstraint constraint;
    std::vector<std::string> searched_repos;
};

/// The implicit provide every package carries: its own name at its own EVR.
VersionConstraint self_provide(const Package& pkg);

}  // namespace umdv
