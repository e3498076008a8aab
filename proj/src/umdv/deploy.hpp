// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umdv/context.hpp"
#include "umdv/product.hpp"
#include "umdv/qc.hpp"
#include "umdv/repoindex.hpp"

namespace umdv {

struct DeploymentOutcome {
    int exit_status = -1;
    std::vector<Package> installed_packages;
    fs::path log_path;
    fs::path install_root;
};

/// Parsed Mock outcome manifest: the package set a deployment would
/// install, the file tree it would create, and the scripted exit code.
struct MockManifest {
    struct FileEntry {
        std::string path;      // absolute path inside the install root
        unsigned int mode;     // octal permission bits
        std::string content;
    };

    std::vector<Package> packages;
    std::vector<FileEntry> files;
    int exit_code = 0;
};

/// Manifest grammar, one directive per line:
///   package: name epoch version release arch [license=...]
///   file: path mode content:<literal> | file: path mode @relative-path
///   exit: N
/// "-" as the release stands for an empty release. '#' starts a comment.
MockManifest parse_mock_manifest(const std::string& text, const fs::path& base_dir);

struct PreparedEnvironment {
    BackendConfig backend;
    fs::path deploy_dir;     // <workdir>/deploy
    fs::path log_path;       // <workdir>/deploy/deploy.log
    fs::path install_root;   // <workdir>/install_root
    std::optional<MockManifest> manifest;   // Mock only
    std::vector<std::string> command;       // Live invocation argv
};

/// Verify tool availability (Live) or load the outcome manifest (Mock),
/// fetch module/role sources, and generate parameter files.
PreparedEnvironment prepare_environment(const ProductSpec& spec, const RunContext& ctx);

/// The backend invocation argv for a Live deployment (pure; testable
/// without the tools installed). Mock yields an empty vector.
std::vector<std::string> backend_command(const BackendConfig& backend, const ProductSpec& spec,
                                         const RunContext& ctx);

/// Run the deployment: invoke the backend (Live) or materialize the
/// manifest into install_root (Mock).
DeploymentOutcome execute_deployment(const PreparedEnvironment& env, const RunContext& ctx);

/// Installed package set as reported by the system package manager.
std::vector<Package> query_installed_packages(Flavor flavor);

/// QC_DIST_1: deployment succeeded and the candidate package set is
/// closure-clean over candidate+base repositories.
CheckResult check_binary_distribution(const DeploymentOutcome& outcome,
                                      const RepoIndex& candidate,
                                      const std::vector<RepoIndex>& base_repos);

/// QC_UPGRADE_1: every package name present in both repositories must not
/// go backwards. NotApplicable when no name is shared.
CheckResult check_upgrade(const RepoIndex& production, const RepoIndex& candidate);

}  // namespace umdv
