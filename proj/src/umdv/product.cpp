// Copyright 2026 The umd-verify Authors
// Licensed under the Apache License, Version 2.0

#include "umdv/product.hpp"

#include <yaml-cpp/yaml.h>

#include <set>

namespace umdv {

namespace {

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& msg) {
    throw ParseError(msg, node.Mark().line + 1, node.Mark().column + 1);
}

std::string scalar(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar())
        fail_at(node, what + " must be a scalar");
    return node.as<std::string>();
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& what) {
    if (!node.IsSequence())
        fail_at(node, what + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : node)
        out.push_back(scalar(item, what + " entry"));
    return out;
}

// extra_vars style: a sequence of single-pair maps, order preserved,
// duplicate keys rejected.
std::vector<std::pair<std::string, std::string>> pair_list(const YAML::Node& node,
                                                           const std::string& what) {
    if (!node.IsSequence())
        fail_at(node, what + " must be a list of single-key mappings");
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string> seen;
    for (const auto& item : node) {
        if (!item.IsMap() || item.size() != 1)
            fail_at(item, what + " entries must be single-key mappings");
        auto kv = item.begin();
        std::string key = kv->first.as<std::string>();
        std::string value = scalar(kv->second, what + " value for '" + key + "'");
        if (!seen.insert(key).second)
            fail_at(item, "duplicate " + what + " key '" + key + "'");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

// "module: [url, branch]" or "module: [[url, branch], ...]".
std::vector<std::pair<std::string, std::string>> module_list(const YAML::Node& node) {
    if (!node.IsSequence() || node.size() == 0)
        fail_at(node, "module must be a [url, branch] pair or a list of pairs");
    std::vector<std::pair<std::string, std::string>> out;
    auto parse_pair = [](const YAML::Node& pair) -> std::pair<std::string, std::string> {
        if (!pair.IsSequence() || pair.size() != 2)
            fail_at(pair, "module entry must be a [url, branch] pair");
        return {pair[0].as<std::string>(), pair[1].as<std::string>()};
    };
    if (node[0].IsSequence()) {
        for (const auto& item : node)
            out.push_back(parse_pair(item));
    } else {
        out.push_back(parse_pair(node));
    }
    return out;
}

BackendConfig parse_backend(const YAML::Node& node) {
    if (!node.IsMap())
        fail_at(node, "cfgtool must be a mapping");
    if (!node["type"])
        fail_at(node, "cfgtool requires a 'type' key");
    std::string type = node["type"].as<std::string>();

    if (type == "puppet") {
        PuppetBackend b;
        if (node["manifest"])
            b.manifest = scalar(node["manifest"], "manifest");
        if (node["hiera_data"])
            b.hiera_data = string_list(node["hiera_data"], "hiera_data");
        if (node["module"])
            b.modules = module_list(node["module"]);
        if (b.manifest.empty())
            fail_at(node, "puppet cfgtool requires a manifest");
        return b;
    }
    if (type == "ansible") {
        AnsibleBackend b;
        if (node["role"])
            b.role = scalar(node["role"], "role");
        if (node["checkout"])
            b.checkout = scalar(node["checkout"], "checkout");
        if (node["tags"])
            b.tags = string_list(node["tags"], "tags");
        if (node["extra_vars"])
            b.extra_vars = pair_list(node["extra_vars"], "cfgtool extra_vars");
        if (b.role.empty())
            fail_at(node, "ansible cfgtool requires a role");
        return b;
    }
    if (type == "mock") {
        MockBackend b;
        if (node["manifest"])
            b.outcome_manifest = scalar(node["manifest"], "manifest");
        else if (node["outcome_manifest"])
            b.outcome_manifest = scalar(node["outcome_manifest"], "outcome_manifest");
        if (b.outcome_manifest.empty())
            fail_at(node, "mock cfgtool requires an outcome manifest path");
        return b;
    }
    fail_at(node["type"], "unknown cfgtool type '" + type + "' (expected puppet, ansible or mock)");
}

InfoModelSpec parse_infomodel(const YAML::Node& node) {
    InfoModelSpec im;
    if (!node.IsMap())
        fail_at(node, "infomodel must be a mapping");
    if (node["flavors"]) {
        im.flavors = string_list(node["flavors"], "infomodel flavors");
        for (const auto& f : im.flavors)
            if (f != "glue1" && f != "glue2")
                fail_at(node["flavors"], "unknown infomodel flavor '" + f + "'");
        if (im.flavors.empty())
            fail_at(node["flavors"], "infomodel flavors must not be empty");
    }
    if (node["host"])
        im.host = scalar(node["host"], "infomodel host");
    if (node["port"]) {
        im.port = node["port"].as<int>();
        if (im.port < 1 || im.port > 65535)
            fail_at(node["port"], "infomodel port out of range");
    }
    if (node["base_dn"])
        im.base_dn = scalar(node["base_dn"], "infomodel base_dn");
    if (node["fetch_command"])
        im.fetch_command = scalar(node["fetch_command"], "infomodel fetch_command");
    if (node["validator_glue1"])
        im.validator_glue1 = scalar(node["validator_glue1"], "validator_glue1");
    if (node["validator_glue2"])
        im.validator_glue2 = scalar(node["validator_glue2"], "validator_glue2");
    if (node["version_attribute"])
        im.version_attribute = scalar(node["version_attribute"], "version_attribute");
    return im;
}

// Only the pluggable slots may carry external scripts; built-in checks
// cannot be overridden from a product definition.
const std::set<std::string>& pluggable_slots() {
    static const std::set<std::string> slots = {"QC_SEC_3", "QC_SEC_4", "QC_MON_1", "QC_ACC_1"};
    return slots;
}

ProductSpec parse_product_spec_impl(const std::string& text, const fs::path& base_dir);

}  // namespace

fs::path ProductSpec::resolve(const std::string& p) const {
    fs::path path(p);
    if (path.is_absolute())
        return path;
    return base_dir / path;
}

ProductSpec parse_product_spec(const std::string& text, const fs::path& base_dir) {
    try {
        return parse_product_spec_impl(text, base_dir);
    } catch (const YAML::Exception& e) {
        // Covers parser errors and bad scalar conversions alike.
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

namespace {

ProductSpec parse_product_spec_impl(const std::string& text, const fs::path& base_dir) {
    YAML::Node root = YAML::Load(text);
    if (!root.IsMap())
        throw ParseError("product definition must be a mapping");

    ProductSpec spec;
    spec.base_dir = base_dir;

    if (!root["name"])
        throw ParseError("product definition requires a name");
    spec.name = scalar(root["name"], "name");
    if (spec.name.empty())
        fail_at(root["name"], "product name must not be empty");

    if (root["doc"])
        spec.doc = scalar(root["doc"], "doc");
    if (root["need_cert"])
        spec.need_cert = root["need_cert"].as<bool>();
    if (root["has_infomodel"])
        spec.has_infomodel = root["has_infomodel"].as<bool>();

    if (!root["cfgtool"])
        throw ParseError("product definition requires a cfgtool section");
    spec.backend = parse_backend(root["cfgtool"]);

    if (root["qc_specific_id"])
        spec.qc_specific_id = scalar(root["qc_specific_id"], "qc_specific_id");
    if (root["extra_vars"])
        spec.extra_vars = pair_list(root["extra_vars"], "extra_vars");

    if (root["hooks"]) {
        const YAML::Node& hooks = root["hooks"];
        if (!hooks.IsMap())
            fail_at(hooks, "hooks must be a mapping");
        if (hooks["pre_config"])
            spec.hooks.pre_config = scalar(hooks["pre_config"], "pre_config");
        if (hooks["post_config"])
            spec.hooks.post_config = scalar(hooks["post_config"], "post_config");
    }

    if (root["external_checks"]) {
        const YAML::Node& checks = root["external_checks"];
        if (!checks.IsMap())
            fail_at(checks, "external_checks must be a mapping");
        for (const auto& kv : checks) {
            std::string id = kv.first.as<std::string>();
            if (!pluggable_slots().count(id))
                fail_at(kv.second, "external_checks: '" + id + "' is not a pluggable slot");
            spec.external_checks[id] = scalar(kv.second, "external_checks script for " + id);
        }
    }

    if (root["support_url"])
        spec.support_url = scalar(root["support_url"], "support_url");
    if (root["scan_paths"])
        spec.scan_paths = string_list(root["scan_paths"], "scan_paths");
    if (root["infomodel"])
        spec.infomodel = parse_infomodel(root["infomodel"]);

    return spec;
}

}  // namespace

ProductSpec load_product_spec(const fs::path& path) {
    std::string text = read_file(path);
    fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    return parse_product_spec(text, base);
}

}  // namespace umdv
