// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <string>
#include <string_view>

namespace umdv {

enum class Flavor { Rpm, Deb };

std::string to_string(Flavor f);
Flavor flavor_from_string(std::string_view s);

/// Epoch-version-release triple. Epoch defaults to 0 when absent; release
/// may be empty (DEB packages without a revision, unversioned provides).
struct Evr {
    long epoch = 0;
    std::string version;
    std::string release;

    bool operator==(const Evr&) const = default;
};

/// Render as "[epoch:]version[-release]", epoch omitted when 0.
std::string format_evr(const Evr& evr);

/// Parse "[epoch:]version[-release]". The release is split on the last '-'.
Evr parse_evr(std::string_view s);

/// RPM segment comparison on a single version component (rpmvercmp rules):
/// maximal alpha/digit runs, numeric runs compared as integers, numeric
/// beats alphabetic, tilde sorts before everything including end of string.
int rpm_segment_compare(std::string_view a, std::string_view b);

/// Debian component comparison (alternating non-digit/digit blocks, tilde
/// lowest, letters before other characters).
int deb_segment_compare(std::string_view a, std::string_view b);

/// Full EVR comparison: epoch numerically, then version, then release.
/// Returns -1, 0 or +1.
int compare_versions_rpm(const Evr& a, const Evr& b);
int compare_versions_deb(const Evr& a, const Evr& b);
int compare_evr(const Evr& a, const Evr& b, Flavor flavor);

/// Comparison used when matching provides against requirements. RPM skips
/// the release parts unless both sides carry one; DEB always compares the
/// full triple (an absent revision is simply the empty string).
int compare_evr_for_match(const Evr& provided, const Evr& required, Flavor flavor);

}  // namespace umdv
