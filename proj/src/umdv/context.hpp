// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "umdv/evr.hpp"
#include "umdv/util.hpp"

namespace umdv {

enum class RunMode { Live, Mock };

inline std::string to_string(RunMode m) { return m == RunMode::Live ? "live" : "mock"; }

inline RunMode run_mode_from_string(const std::string& s) {
    std::string v = to_lower(s);
    if (v == "live")
        return RunMode::Live;
    if (v == "mock")
        return RunMode::Mock;
    throw Error("unknown mode '" + s + "' (expected live or mock)");
}

/// Runtime parameters for one validation run. repositories[0] is the
/// candidate (verification) repository; any further entries are the
/// production/base repositories.
struct RunContext {
    std::string release;
    std::string os;
    std::vector<std::string> repositories;
    fs::path workdir;
    RunMode mode = RunMode::Mock;
    std::chrono::seconds timeout_per_check{600};
    // Exported to hooks, external checks and tests (UMD_* plus extra_vars).
    std::vector<std::pair<std::string, std::string>> environment;
    fs::path tests_file;  // test-definition file; may be empty
};

/// Package flavor implied by an --os label: Debian-family labels map to
/// Deb, everything else to Rpm.
inline Flavor flavor_for_os(const std::string& os) {
    std::string v = to_lower(os);
    if (starts_with(v, "ubuntu") || starts_with(v, "debian"))
        return Flavor::Deb;
    return Flavor::Rpm;
}

}  // namespace umdv
