// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umdv/proc.hpp"
#include "umdv/util.hpp"

namespace testutil {

inline std::string random_suffix() {
    static std::mt19937_64 rng{std::random_device{}()};
    static const char* digits = "0123456789abcdef";
    std::string out(12, '0');
    for (auto& c : out)
        c = digits[rng() % 16];
    return out;
}

/// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        auto base = umdv::fs::temp_directory_path();
        for (int i = 0; i < 100; ++i) {
            auto candidate = base / ("umdv-test-" + random_suffix());
            std::error_code ec;
            if (umdv::fs::create_directory(candidate, ec) && !ec) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create a scratch directory");
    }
    ~TempDir() {
        std::error_code ec;
        umdv::fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const umdv::fs::path& path() const { return path_; }
    umdv::fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    umdv::fs::path path_;
};

inline umdv::fs::path support_dir() { return umdv::fs::path(UMDV_SUPPORT_DIR); }

/// Write an executable script.
inline umdv::fs::path write_script(const umdv::fs::path& path, const std::string& body) {
    umdv::write_file(path, body);
    umdv::fs::permissions(path, umdv::fs::perms::owner_all | umdv::fs::perms::group_read |
                                    umdv::fs::perms::group_exec |
                                    umdv::fs::perms::others_read |
                                    umdv::fs::perms::others_exec);
    return path;
}

/// Batch-run a version comparison oracle: one "A<TAB>B" per line in, one
/// -1/0/1 per line out.
inline std::vector<int> run_vercmp_oracle(
    const std::string& interpreter, const umdv::fs::path& script,
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const umdv::fs::path& scratch) {
    std::string input;
    for (const auto& [a, b] : pairs)
        input += a + "\t" + b + "\n";
    umdv::fs::path pairs_file = scratch / ("pairs-" + random_suffix() + ".txt");
    umdv::write_file(pairs_file, input);

    umdv::RunOptions opts;
    opts.timeout = std::chrono::seconds(120);
    umdv::RunResult res =
        umdv::run_process({interpreter, script.string(), pairs_file.string()}, opts);
    if (res.exit_code != 0)
        throw std::runtime_error("oracle " + script.string() +
                                 " failed: " + res.output.substr(0, 500));

    std::vector<int> out;
    for (const auto& line : umdv::split(res.output, '\n')) {
        std::string t = umdv::trim(line);
        if (t.empty())
            continue;
        out.push_back(std::stoi(t));
    }
    if (out.size() != pairs.size())
        throw std::runtime_error("oracle returned " + std::to_string(out.size()) +
                                 " results for " + std::to_string(pairs.size()) + " pairs");
    return out;
}

}  // namespace testutil
