// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace umdv {

struct LdifEntry {
    std::string dn;
    // Ordered attribute list; repeated names form the multiset of values.
    std::vector<std::pair<std::string, std::string>> attributes;

    bool operator==(const LdifEntry&) const = default;

    /// All values for a name (attribute names compare case-insensitively).
    std::vector<std::string> values(const std::string& name) const;
};

struct LdifDocument {
    std::vector<LdifEntry> entries;

    bool operator==(const LdifDocument&) const = default;
};

/// Parses LDIF content: line folding (leading space), base64 values
/// ("::"), comments, an optional version header. Change records
/// ("changetype") are rejected; so are URL values (":<").
LdifDocument parse_ldif(const std::string& text);

/// Inverse of parse_ldif; values that are unsafe verbatim go out base64.
std::string serialize_ldif(const LdifDocument& doc);

}  // namespace umdv
