// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "umdv/util.hpp"

namespace umdv {

struct PuppetBackend {
    std::string manifest;                 // "fts.pp"
    std::vector<std::string> hiera_data;  // ["fts.yaml", "fetchcrl.yaml"]
    // (repository URL, branch) pairs, checked out verbatim.
    std::vector<std::pair<std::string, std::string>> modules;
};

struct AnsibleBackend {
    std::string role;  // role repository URL
    std::string checkout;
    std::vector<std::string> tags;
    std::vector<std::pair<std::string, std::string>> extra_vars;
};

struct MockBackend {
    std::string outcome_manifest;  // path, resolved against the product file
};

using BackendConfig = std::variant<PuppetBackend, AnsibleBackend, MockBackend>;

struct HookSpec {
    std::string pre_config;   // script path; empty = unconfigured
    std::string post_config;
};

/// Information-model settings (consumed only when has_infomodel).
struct InfoModelSpec {
    std::vector<std::string> flavors{"glue2"};  // subset of {"glue1", "glue2"}
    std::string host = "localhost";
    int port = 2170;
    std::string base_dn = "o=glue";
    // Command template for fetching the published document. Placeholders
    // {host}, {port}, {base_dn}. Defaults to an ldapsearch invocation.
    std::string fetch_command;
    // External validator templates ({document} placeholder). When empty the
    // built-in well-formedness check stands in for the declared flavor.
    std::string validator_glue1;
    std::string validator_glue2;
    std::string version_attribute = "GLUE2EntityOtherInfo";
};

struct ProductSpec {
    std::string name;
    std::string doc;
    bool need_cert = false;
    bool has_infomodel = false;
    BackendConfig backend = MockBackend{};
    std::string qc_specific_id;  // key into the test-definition file
    std::vector<std::pair<std::string, std::string>> extra_vars;  // ordered
    HookSpec hooks;
    std::map<std::string, std::string> external_checks;  // QC id -> script
    std::string support_url;                             // QC_SUPPORT_1 target
    std::vector<std::string> scan_paths;                 // extra QC_SEC_5/6 roots
    InfoModelSpec infomodel;
    fs::path base_dir;  // directory of the definition file

    /// Resolve a (possibly relative) path against base_dir.
    fs::path resolve(const std::string& p) const;
};

/// Parse a product definition from text. base_dir anchors relative paths.
ProductSpec parse_product_spec(const std::string& text, const fs::path& base_dir = ".");

ProductSpec load_product_spec(const fs::path& path);

}  // namespace umdv
